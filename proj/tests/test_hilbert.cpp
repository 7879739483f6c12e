#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "wfp/errors.hpp"
#include "wfp/hilbert.hpp"
#include "wfp/verify.hpp"

using namespace wfp;
using namespace wfp::hilbert;

namespace {

Layout qubits(std::initializer_list<const char*> names) {
  std::vector<Subsystem> s;
  for (const char* n : names) s.push_back({n, 2});
  return Layout(s);
}

Matrix m2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

const Matrix I2 = Matrix::Identity(2, 2);
const Matrix X = m2(0, 1, 1, 0);
const Matrix Z = m2(1, 0, 0, -1);

}  // namespace

TEST(Layout, FirstFactorIsMostSignificant) {
  Layout l({{"S", 3}, {"M", 2}});
  EXPECT_EQ(l.total_dim(), 6u);
  EXPECT_EQ(l.stride(0), 2u);
  EXPECT_EQ(l.index({2, 1}), 5u);
  EXPECT_EQ(l.digits(3), (std::vector<std::size_t>{1, 1}));
}

TEST(Layout, RejectsBadFactors) {
  EXPECT_THROW(Layout({{"A", 2}, {"A", 2}}), SchemaError);
  EXPECT_THROW(Layout({{"A", 1}}), SchemaError);
  EXPECT_THROW(Layout({{"A", 4096}, {"B", 2}}), SchemaError);
  EXPECT_THROW(qubits({"A"}).index_of("B"), SchemaError);
}

TEST(StateVector, NormChecked) {
  Layout l = qubits({"q"});
  Vector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(StateVector(l, v), InvariantViolation);
  auto s = StateVector::normalized(l, v);
  EXPECT_NEAR(s.amplitudes().norm(), 1.0, 1e-15);
  EXPECT_THROW(StateVector::normalized(l, Vector::Zero(2)), InvariantViolation);
  EXPECT_THROW(StateVector(l, Vector::Ones(3) / std::sqrt(3.0)), SchemaError);
}

TEST(Operator, KindChecked) {
  Layout l = qubits({"q"});
  EXPECT_NO_THROW(Operator(l, X, OperatorKind::Unitary));
  EXPECT_THROW(Operator(l, 2.0 * X, OperatorKind::Unitary), InvariantViolation);
  EXPECT_THROW(Operator(l, X, OperatorKind::Projector), InvariantViolation);
  EXPECT_THROW(Operator(l, Matrix::Identity(3, 3), OperatorKind::General), SchemaError);
}

TEST(Embed, MatchesKroneckerProduct) {
  Layout l = qubits({"A", "B", "C"});
  Layout one = qubits({"q"});
  Operator x(one, X, OperatorKind::Unitary);
  EXPECT_LT(max_abs(embed(x, l, {"B"}).matrix() - kron(kron(I2, X), I2)), 1e-15);
  EXPECT_LT(max_abs(embed(x, l, {"C"}).matrix() - kron(kron(I2, I2), X)), 1e-15);

  // Two-target operator with reversed target order.
  Layout two = qubits({"x", "y"});
  Operator xz(two, kron(X, Z), OperatorKind::Unitary);
  EXPECT_LT(max_abs(embed(xz, l, {"C", "A"}).matrix() - kron(kron(Z, I2), X)), 1e-15);
  EXPECT_THROW(embed(xz, l, {"A", "A"}), SchemaError);
  EXPECT_THROW(embed(x, l, {"A", "B"}), SchemaError);
}

TEST(Embed, PropertyPreservesUnitarityAndProducts) {
  gen::Rng rng(11);
  Layout l({{"A", 2}, {"B", 3}, {"C", 2}});
  for (int trial = 0; trial < 50; ++trial) {
    Layout ab = l.sublayout({"B", "A"});
    Matrix u = gen::haar_unitary(rng, 6);
    Matrix v = gen::haar_unitary(rng, 6);
    Operator U(ab, u, OperatorKind::Unitary), V(ab, v, OperatorKind::Unitary);
    Matrix eu = embed(U, l, {"B", "A"}).matrix();
    Matrix ev = embed(V, l, {"B", "A"}).matrix();
    EXPECT_TRUE(is_unitary(eu, 1e-9));
    // Embedding is a homomorphism.
    Matrix euv = embed(U.compose(V), l, {"B", "A"}).matrix();
    EXPECT_LT(max_abs(euv - eu * ev), 1e-9);
  }
}

TEST(CnotInBasis, ComputationalBasisIsCnot) {
  Layout l = qubits({"S", "M"});
  Operator c = cnot_in_basis(StateVector::basis(qubits({"s"}), 1), l, "S", "M");
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  EXPECT_LT(max_abs(c.matrix() - cnot), 1e-15);
}

TEST(CnotInBasis, RecordsProjectionAndIsInvolution) {
  Layout l({{"S", 3}, {"M", 2}});
  Vector v(3);
  v << 1.0, -1.0, 1.0;
  auto sv = StateVector::normalized(Layout({{"s", 3}}), v);
  Operator c = cnot_in_basis(sv, l, "S", "M");
  EXPECT_TRUE(is_unitary(c.matrix(), 1e-12));
  EXPECT_LT(max_abs(c.matrix() * c.matrix() - Matrix::Identity(6, 6)), 1e-12);
  // |v>|0> -> |v>|1>
  Vector in = kron(sv.amplitudes(), Vector::Unit(2, 0));
  Vector out = kron(sv.amplitudes(), Vector::Unit(2, 1));
  EXPECT_LT((c.apply(in) - out).norm(), 1e-12);
  EXPECT_THROW(cnot_in_basis(sv, Layout({{"S", 3}, {"M", 3}}), "S", "M"), SchemaError);
}

TEST(ControlledShift, ThreeOutcomesOnQutritMemory) {
  Layout l({{"S", 3}, {"M", 3}});
  Layout s({{"s", 3}});
  std::vector<Operator> ps;
  for (int k = 0; k < 3; ++k) {
    ps.push_back(projector_from_vector(StateVector::basis(s, static_cast<std::size_t>(k))));
  }
  Operator u = controlled_shift(ps, l, {"S"}, "M");
  EXPECT_TRUE(is_unitary(u.matrix(), 1e-12));
  // |2>|1> -> |2>|(1+2) mod 3> = |2>|0>
  Vector in = Vector::Unit(9, 2 * 3 + 1);
  EXPECT_NEAR(std::abs(u.apply(in)(2 * 3 + 0)), 1.0, 1e-15);
  EXPECT_THROW(controlled_shift(ps, qubits({"S", "M"}), {"S"}, "M"), SchemaError);
  EXPECT_THROW(controlled_shift(ps, l, {"S"}, "S"), SchemaError);
}

TEST(Born, SequentialProjectors) {
  Layout l = qubits({"q"});
  Vector v(2);
  v << 1.0, 1.0;
  auto plus = StateVector::normalized(l, v);
  Operator p0 = projector_from_vector(StateVector::basis(l, 0));
  Operator pplus = projector_from_vector(plus);
  EXPECT_NEAR(born_probability(plus, {p0}), 0.5, 1e-15);
  EXPECT_NEAR(born_probability(plus, {p0, pplus}), 0.25, 1e-15);
  EXPECT_NEAR(born_probability(plus, {p0, complement(p0)}), 0.0, 1e-15);
}

TEST(ProductState, PlacesPiecesByName) {
  Layout l({{"A", 2}, {"S", 3}, {"B", 2}});
  Vector a = Vector::Unit(2, 1), s = Vector::Unit(3, 2), b = Vector::Unit(2, 0);
  Vector full = product_state(l, {{{"S"}, s}, {{"B", "A"}, kron(b, a)}});
  EXPECT_EQ(full.size(), 12);
  EXPECT_NEAR(std::abs(full(l.index({1, 2, 0}))), 1.0, 1e-15);
  EXPECT_THROW(product_state(l, {{{"S"}, s}}), SchemaError);
}
