#include "wfp/presets.hpp"

#include <cmath>

#include "wfp/errors.hpp"

namespace wfp::presets {

using hilbert::Complex;
using hilbert::Layout;
using hilbert::Matrix;
using hilbert::Operator;
using hilbert::OperatorKind;
using hilbert::StateVector;
using hilbert::Vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v.normalized();
}

Operator proj(const Layout& local, const std::vector<Vector>& span) {
  auto d = static_cast<Eigen::Index>(local.total_dim());
  Matrix p = Matrix::Zero(d, d);
  for (const auto& v : span) p += v * v.adjoint();
  return Operator(local, p, OperatorKind::Projector);
}

// Binary measurement: outcome 1 on `one`, outcome 0 on the complement.
std::vector<Operator> binary(const Layout& local, const Vector& one) {
  Operator p1 = proj(local, {one});
  return {hilbert::complement(p1), p1};
}

Measurement agent(std::string name, std::string memory, int time,
                  std::vector<std::string> targets, std::vector<Operator> projectors,
                  std::vector<std::string> labels = {}) {
  Measurement m;
  m.agent = std::move(name);
  m.memory = std::move(memory);
  m.time = time;
  m.targets = std::move(targets);
  m.projectors = std::move(projectors);
  m.outcome_labels = std::move(labels);
  return m;
}

Layout qubits(const std::vector<std::string>& names) {
  std::vector<hilbert::Subsystem> s;
  for (const auto& n : names) s.push_back({n, 2});
  return Layout(s);
}

}  // namespace

MultiAgentSetup fr_setup() {
  Layout layout = qubits({"R", "S", "A", "B", "U", "W"});
  Layout rs = layout.sublayout({"R", "S"});
  StateVector psi(rs, vec({1, 0, 1, 1}));
  Layout q = qubits({"q"});
  Layout pair = qubits({"x", "m"});
  Vector ok = vec({1, 0, 0, -1});
  std::vector<Measurement> agents{
      agent("a", "A", 0, {"R"}, binary(q, vec({0, 1}))),
      agent("b", "B", 1, {"S"}, binary(q, vec({0, 1}))),
      agent("u", "U", 2, {"R", "A"}, binary(pair, ok), {"fail", "ok"}),
      agent("w", "W", 3, {"S", "B"}, binary(pair, ok), {"fail", "ok"}),
  };
  return MultiAgentSetup(layout, psi, std::move(agents), {}, "fr");
}

std::vector<Vector> kcbs_vectors() {
  return {vec({1, -1, 1}), vec({1, 1, 0}), vec({0, 0, 1}), vec({1, 0, 0}), vec({0, 1, 1})};
}

MultiAgentSetup kcbs_setup() {
  Layout layout({{"S", 3}, {"M2", 2}, {"M3", 2}, {"M4", 2}, {"M5", 2}, {"M1", 2}});
  Layout s = layout.sublayout({"S"});
  StateVector psi(s, vec({1, 1, 1}));
  auto v = kcbs_vectors();
  // Orthonormal complements spanning outcome 0 of each a_i.
  std::vector<std::vector<Vector>> rest{
      {vec({0, 1, 1}), vec({-2, -1, 1})},
      {vec({1, -1, 1}), vec({1, -1, -2})},
      {vec({1, 1, 0}), vec({1, -1, 0})},
      {vec({0, 1, 0}), vec({0, 0, 1})},
      {vec({0, 1, -1}), vec({1, 0, 0})},
  };
  auto family = [&](std::size_t i) {
    return std::vector<Operator>{proj(s, rest[i]), proj(s, {v[i]})};
  };
  auto undo = [&](std::size_t i, const std::string& mem) {
    Layout sm = layout.sublayout({"S", mem});
    Operator u = hilbert::cnot_in_basis(StateVector(s, v[i]), sm, "S", mem);
    return TargetedOperator{{"S", mem}, u};
  };
  std::vector<Measurement> agents{
      agent("a2", "M2", 0, {"S"}, family(1)),
      agent("a3", "M3", 1, {"S"}, family(2)),
      agent("a4", "M4", 2, {"S"}, family(3)),
      agent("a5", "M5", 3, {"S"}, family(4)),
      agent("a1", "M1", 4, {"S"}, family(0)),
  };
  agents[2].pre_unitary = undo(1, "M2");
  agents[3].pre_unitary = undo(2, "M3");
  agents[4].pre_unitary = undo(3, "M4");
  return MultiAgentSetup(layout, psi, std::move(agents), {}, "kcbs");
}

std::pair<MultiAgentSetup, MultiAgentSetup> compat_demo_setups(UrsulaBasis basis) {
  Layout q = qubits({"q"});
  Vector bell = vec({1, 0, 0, 1});
  Vector one = vec({0, 1});
  Vector minus = vec({1, -1});

  Layout la = qubits({"R", "S", "A", "B", "C", "D"});
  std::vector<Measurement> a_agents{
      agent("alice", "A", 0, {"R"}, binary(q, one)),
      agent("bob", "B", 1, {"S"}, binary(q, one)),
      agent("charlie", "C", 2, {"R"}, binary(q, minus)),
      agent("debbie", "D", 3, {"R"}, binary(q, one)),
  };
  MultiAgentSetup a(la, StateVector(la.sublayout({"R", "S"}), bell), std::move(a_agents), {},
                    "compat-a");

  Layout lb = qubits({"R", "S", "A", "B", "U"});
  Layout pair = qubits({"x", "m"});
  Vector u_one = basis == UrsulaBasis::Computational ? vec({0, 0, 0, 1}) : vec({1, 0, 0, -1});
  std::vector<Measurement> b_agents{
      agent("alice", "A", 0, {"R"}, binary(q, one)),
      agent("bob", "B", 1, {"S"}, binary(q, one)),
      agent("ursula", "U", 2, {"R", "A"}, binary(pair, u_one)),
  };
  MultiAgentSetup b(lb, StateVector(lb.sublayout({"R", "S"}), bell), std::move(b_agents), {},
                    basis == UrsulaBasis::Computational ? "compat-b-computational"
                                                        : "compat-b-bell");
  return {std::move(a), std::move(b)};
}

NCycleModel pr_box_ncycle() { return extremal_model(4, {1, 1, 1, -1}); }

EmpiricalModel pr_box_model() { return to_empirical_model(pr_box_ncycle()); }

std::vector<ClassicalStatement> liar_chain(std::size_t n) {
  if (n == 0) throw SchemaError("liar chain needs at least one statement");
  std::vector<ClassicalStatement> out;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    out.push_back({ClassicalStatement::Kind::Affirms, {k + 1}});
  }
  out.push_back({ClassicalStatement::Kind::Denies, {0}});
  return out;
}

std::vector<ClassicalStatement> yablo_prefix(std::size_t n) {
  if (n == 0) throw SchemaError("Yablo prefix needs at least one statement");
  std::vector<ClassicalStatement> out;
  for (std::size_t k = 0; k < n; ++k) {
    ClassicalStatement s{ClassicalStatement::Kind::DeniesAll, {}};
    for (std::size_t j = k + 1; j < n; ++j) s.refs.push_back(j);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace wfp::presets
