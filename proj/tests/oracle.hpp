#pragma once

// Brute-force reference computations built from explicit Kronecker products,
// independent of the library's embedding and simulation code.

#include <initializer_list>

#include <unsupported/Eigen/KroneckerProduct>

#include "wfp/hilbert.hpp"

namespace oracle {

using wfp::hilbert::Complex;
using wfp::hilbert::Matrix;
using wfp::hilbert::Vector;

inline Matrix kron_all(std::initializer_list<Matrix> ms) {
  Matrix out = Matrix::Identity(1, 1);
  for (const Matrix& m : ms) out = Eigen::kroneckerProduct(out, m).eval();
  return out;
}

inline Matrix ket_bra(int dim, int i, int j) {
  Matrix m = Matrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

inline Matrix outer(const Vector& v) { return v * v.adjoint() / v.squaredNorm(); }

inline Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v / v.norm();
}

}  // namespace oracle
