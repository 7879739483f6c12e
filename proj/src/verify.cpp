#include "wfp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include <unsupported/Eigen/KroneckerProduct>

#include "wfp/errors.hpp"
#include "wfp/io.hpp"
#include "wfp/ncycle.hpp"
#include "wfp/presets.hpp"
#include "wfp/reasoning.hpp"

namespace wfp {

using hilbert::Complex;
using hilbert::Layout;
using hilbert::Matrix;
using hilbert::Operator;
using hilbert::OperatorKind;
using hilbert::Vector;

namespace gen {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Complex gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double re = n(rng);
  double im = n(rng);
  return {re, im};
}

Layout qubit_layout(const std::vector<std::string>& names) {
  std::vector<hilbert::Subsystem> s;
  for (const auto& n : names) s.push_back({n, 2});
  return Layout(s);
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

Matrix kron_all(const std::vector<Matrix>& ms) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& m : ms) out = Eigen::kroneckerProduct(out, m).eval();
  return out;
}

// Outcome 1 spans a random nonempty proper subset of the basis columns.
std::vector<Operator> binary_in_basis(Rng& rng, const Layout& local, const Matrix& basis) {
  auto d = static_cast<Eigen::Index>(local.total_dim());
  std::vector<Eigen::Index> cols(static_cast<std::size_t>(d));
  std::iota(cols.begin(), cols.end(), 0);
  std::shuffle(cols.begin(), cols.end(), rng);
  std::size_t take = uniform(rng, 1, static_cast<std::size_t>(d) - 1);
  Matrix p1 = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < take; ++k) p1 += basis.col(cols[k]) * basis.col(cols[k]).adjoint();
  Operator one = Operator::unchecked(local, p1, OperatorKind::Projector);
  return {hilbert::complement(one), one};
}

TargetedOperator undo_record(const Layout& layout, const Measurement& m) {
  std::vector<std::string> all = m.targets;
  all.push_back(m.memory);
  Layout local = layout.sublayout(all);
  Operator u = hilbert::controlled_shift(m.projectors, local, m.targets, m.memory);
  return {all, u.adjoint()};
}

Measurement make_agent(std::string name, std::string memory, int time,
                       std::vector<std::string> targets, std::vector<Operator> projectors) {
  Measurement m;
  m.agent = std::move(name);
  m.memory = std::move(memory);
  m.time = time;
  m.targets = std::move(targets);
  m.projectors = std::move(projectors);
  return m;
}

}  // namespace

Matrix haar_unitary(Rng& rng, std::size_t dim) {
  auto d = static_cast<Eigen::Index>(dim);
  Matrix g(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) g(r, c) = gaussian(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    Complex x = r(i, i);
    q.col(i) *= std::abs(x) > 0 ? x / std::abs(x) : Complex(1.0);
  }
  return q;
}

MultiAgentSetup random_setup(Rng& rng, std::size_t max_agents, std::size_t max_qubits) {
  const std::size_t nq = uniform(rng, 1, std::max<std::size_t>(1, max_qubits));
  const std::size_t na = uniform(rng, 2, std::max<std::size_t>(2, max_agents));
  auto systems = numbered("S", nq);
  auto memories = numbered("M", na);
  std::vector<std::string> all = systems;
  all.insert(all.end(), memories.begin(), memories.end());
  Layout layout = qubit_layout(all);
  Layout sys = layout.sublayout(systems);

  std::vector<Matrix> frame;
  for (std::size_t q = 0; q < nq; ++q) frame.push_back(haar_unitary(rng, 2));
  auto sd = static_cast<Eigen::Index>(sys.total_dim());
  Vector phi(sd);
  bool any = false;
  for (Eigen::Index k = 0; k < sd; ++k) {
    phi(k) = coin(rng, 0.5) ? gaussian(rng) : Complex(0.0);
    any = any || std::abs(phi(k)) > 0;
  }
  if (!any) phi(static_cast<Eigen::Index>(uniform(rng, 0, sys.total_dim() - 1))) = 1.0;
  hilbert::StateVector psi = hilbert::StateVector::normalized(sys, kron_all(frame) * phi);

  std::vector<Measurement> agents;
  for (std::size_t i = 0; i < na; ++i) {
    std::vector<std::size_t> qs{uniform(rng, 0, nq - 1)};
    if (nq >= 2 && coin(rng, 0.3)) {
      std::size_t other = uniform(rng, 0, nq - 2);
      qs.push_back(other >= qs[0] ? other + 1 : other);
    }
    std::vector<std::string> targets;
    for (auto q : qs) targets.push_back(systems[q]);
    Layout local = layout.sublayout(targets);
    double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    Matrix basis;
    if (r < 0.4) {
      basis = Matrix::Identity(static_cast<Eigen::Index>(local.total_dim()),
                               static_cast<Eigen::Index>(local.total_dim()));
    } else if (r < 0.8) {
      std::vector<Matrix> fs;
      for (auto q : qs) fs.push_back(frame[q]);
      basis = kron_all(fs);
    } else {
      basis = haar_unitary(rng, local.total_dim());
    }
    Measurement m = make_agent("a" + std::to_string(i + 1), memories[i], static_cast<int>(i),
                               targets, binary_in_basis(rng, local, basis));
    if (i > 0 && coin(rng, 0.3)) m.pre_unitary = undo_record(layout, agents[uniform(rng, 0, i - 1)]);
    agents.push_back(std::move(m));
  }
  return MultiAgentSetup(layout, psi, std::move(agents), {}, "random");
}

MultiAgentSetup hardy_setup(Rng& rng) {
  auto amp = [&] {
    double mag = std::uniform_real_distribution<double>(0.2, 1.0)(rng);
    double ph = std::uniform_real_distribution<double>(0.0, 2 * M_PI)(rng);
    return std::polar(mag, ph);
  };
  Complex a = amp(), b = amp(), c = amp();
  Layout layout = qubit_layout({"R", "S", "A", "B", "U", "W"});
  Layout rs = layout.sublayout({"R", "S"});
  Vector v(4);
  v << a, 0.0, b, c;
  hilbert::StateVector psi = hilbert::StateVector::normalized(rs, v);

  Layout q = qubit_layout({"q"});
  Layout pair = qubit_layout({"x", "m"});
  auto z = [&] {
    Matrix p1 = Matrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    Operator one(q, p1, OperatorKind::Projector);
    return std::vector<Operator>{hilbert::complement(one), one};
  };
  auto ok = [&](Complex x, Complex y) {
    Vector o(4);
    o << x, 0.0, 0.0, y;
    o.normalize();
    Operator one(pair, o * o.adjoint(), OperatorKind::Projector);
    return std::vector<Operator>{hilbert::complement(one), one};
  };
  std::vector<Measurement> agents{
      make_agent("a", "A", 0, {"R"}, z()),
      make_agent("b", "B", 1, {"S"}, z()),
      make_agent("u", "U", 2, {"R", "A"}, ok(std::conj(b), -std::conj(a))),
      make_agent("w", "W", 3, {"S", "B"}, ok(std::conj(c), -std::conj(b))),
  };
  agents[2].outcome_labels = {"fail", "ok"};
  agents[3].outcome_labels = {"fail", "ok"};
  return MultiAgentSetup(layout, psi, std::move(agents), {}, "hardy");
}

MultiAgentSetup commuting_setup(Rng& rng, std::size_t qubits,
                                const std::vector<std::vector<int>>& labels,
                                const std::vector<Complex>& amplitudes) {
  const std::size_t n = labels.size();
  auto systems = numbered("S", qubits);
  auto memories = numbered("M", n);
  std::vector<std::string> all = systems;
  all.insert(all.end(), memories.begin(), memories.end());
  Layout layout = qubit_layout(all);
  Layout sys = layout.sublayout(systems);
  const std::size_t dim = sys.total_dim();
  if (amplitudes.size() != dim) throw PreconditionError("commuting_setup: amplitude count");
  Matrix u = haar_unitary(rng, dim);
  auto d = static_cast<Eigen::Index>(dim);

  Vector phi(d);
  for (std::size_t k = 0; k < dim; ++k) phi(static_cast<Eigen::Index>(k)) = amplitudes[k];
  hilbert::StateVector psi = hilbert::StateVector::normalized(sys, u * phi);

  std::vector<Measurement> agents;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i].size() != dim) throw PreconditionError("commuting_setup: label count");
    Matrix p0 = Matrix::Zero(d, d), p1 = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < dim; ++k) {
      auto col = u.col(static_cast<Eigen::Index>(k));
      (labels[i][k] == 1 ? p1 : p0) += col * col.adjoint();
    }
    Measurement m = make_agent("a" + std::to_string(i + 1), memories[i], static_cast<int>(i), systems,
                               {Operator::unchecked(sys, p0, OperatorKind::Projector),
                                Operator::unchecked(sys, p1, OperatorKind::Projector)});
    if (i > 0) m.pre_unitary = undo_record(layout, agents[i - 1]);
    agents.push_back(std::move(m));
  }
  return MultiAgentSetup(layout, psi, std::move(agents), {}, "commuting");
}

MultiAgentSetup yablo_setup(Rng& rng, std::size_t n, std::vector<std::size_t>* order) {
  auto systems = numbered("S", n);
  auto memories = numbered("M", n);
  std::vector<std::string> all = systems;
  all.insert(all.end(), memories.begin(), memories.end());
  Layout layout = qubit_layout(all);
  Layout sys = layout.sublayout(systems);
  const std::size_t dim = sys.total_dim();
  auto d = static_cast<Eigen::Index>(dim);
  Matrix u = haar_unitary(rng, dim);

  // Pattern position p is played by agent perm[p]; basis bit of agent i is
  // qubit i. Support: the empty string plus every single-one string.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  if (order) *order = perm;
  Vector phi = Vector::Zero(d);
  if (coin(rng, 0.5)) phi(0) = gaussian(rng);
  for (std::size_t i = 0; i < n; ++i) {
    phi(static_cast<Eigen::Index>(std::size_t{1} << (n - 1 - i))) = gaussian(rng);
  }
  hilbert::StateVector psi = hilbert::StateVector::normalized(sys, u * phi);

  std::vector<Measurement> agents;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix p1 = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < dim; ++k) {
      if ((k >> (n - 1 - i)) & 1U) {
        auto col = u.col(static_cast<Eigen::Index>(k));
        p1 += col * col.adjoint();
      }
    }
    Operator one = Operator::unchecked(sys, p1, OperatorKind::Projector);
    agents.push_back(make_agent("y" + std::to_string(i + 1), memories[i], static_cast<int>(i),
                                systems, {hilbert::complement(one), one}));
  }
  return MultiAgentSetup(layout, psi, std::move(agents), {}, "yablo");
}

EmpiricalModel random_model(Rng& rng, std::size_t max_vars) {
  const std::size_t n = uniform(rng, 2, std::max<std::size_t>(2, max_vars));
  MeasurementScenario sc;
  sc.variables = numbered("X", n);
  sc.arities.assign(n, 2);
  const int mode = static_cast<int>(uniform(rng, 0, 2));

  std::set<VariableSet> ctxs;
  if (mode == 2 && n >= 3) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = (i + 1) % n;
      ctxs.insert({std::min(i, j), std::max(i, j)});
    }
  } else {
    std::size_t m = uniform(rng, 2, n + 1);
    for (std::size_t c = 0; c < m; ++c) {
      std::vector<std::size_t> vars(n);
      std::iota(vars.begin(), vars.end(), 0);
      std::shuffle(vars.begin(), vars.end(), rng);
      vars.resize(uniform(rng, 1, std::min<std::size_t>(3, n)));
      std::sort(vars.begin(), vars.end());
      ctxs.insert(vars);
    }
    for (std::size_t v = 0; v < n; ++v) {
      bool covered = std::any_of(ctxs.begin(), ctxs.end(), [&](const VariableSet& c) {
        return std::find(c.begin(), c.end(), v) != c.end();
      });
      if (!covered) ctxs.insert({v});
    }
  }
  sc.contexts.assign(ctxs.begin(), ctxs.end());

  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<std::vector<double>> tables;
  if (mode == 0) {
    // Projection of a distribution over a few global assignments.
    std::size_t k = uniform(rng, 1, 6);
    std::vector<std::pair<std::size_t, double>> support;
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      support.emplace_back(uniform(rng, 0, (std::size_t{1} << n) - 1), weight(rng));
      total += support.back().second;
    }
    for (const auto& c : sc.contexts) {
      std::vector<double> t(std::size_t{1} << c.size(), 0.0);
      for (const auto& [g, w] : support) {
        std::size_t idx = 0;
        for (auto v : c) idx = 2 * idx + ((g >> (n - 1 - v)) & 1U);
        t[idx] += w / total;
      }
      tables.push_back(std::move(t));
    }
  } else {
    for (const auto& c : sc.contexts) {
      std::vector<double> t(std::size_t{1} << c.size(), 0.0);
      // Parity constraints on pairs give PR-like tables; otherwise random zeros.
      int parity = c.size() == 2 && coin(rng, 0.6) ? static_cast<int>(uniform(rng, 0, 1)) : -1;
      double total = 0.0;
      for (std::size_t e = 0; e < t.size(); ++e) {
        bool allowed = parity < 0 ? coin(rng, 0.6)
                                  : static_cast<int>(((e >> 1) ^ e) & 1U) == parity;
        t[e] = allowed ? weight(rng) : 0.0;
        total += t[e];
      }
      if (total == 0.0) {
        t[uniform(rng, 0, t.size() - 1)] = 1.0;
        total = 1.0;
      }
      for (double& p : t) p /= total;
      tables.push_back(std::move(t));
    }
  }
  sc.state_ref = "random";
  return EmpiricalModel(std::move(sc), std::move(tables));
}

}  // namespace gen

namespace {

using gen::Rng;

struct Suite {
  const char* name;
  std::size_t min_cases;
  std::function<void(Rng&, std::size_t, SuiteResult&, const Tolerances&)> run;
};

std::string dump(const MultiAgentSetup& s) { return io::setup_to_json(s).dump(); }
std::string dump(const EmpiricalModel& m) { return io::model_to_json(m).dump(); }

template <typename T>
void fail(SuiteResult& r, std::size_t c, const std::string& what, const T& instance) {
  r.failures.push_back("case " + std::to_string(c) + ": " + what + "; instance " + dump(instance));
}

Statement inference(std::size_t a, int va, std::size_t b, int vb) {
  Statement s;
  s.kind = StatementKind::Inference;
  s.antecedent = Event({{a, va}});
  s.consequent = Event({{b, vb}});
  s.probability = 1.0;
  return s;
}

std::vector<Complex> random_amplitudes(Rng& rng, const std::vector<bool>& support) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Complex> out;
  for (bool s : support) {
    double re = n(rng);
    double im = n(rng);
    out.push_back(s ? Complex(re, im) : Complex(0.0));
  }
  return out;
}

void negation_suite(Rng& rng, std::size_t cases, SuiteResult& r, const Tolerances& tol) {
  std::size_t setups = 0, models = 0;
  auto check = [&](const ProbabilityModel& pm, std::size_t c, const auto& instance) {
    for (const auto& s : derive_statements(pm, tol)) {
      if (s.kind != StatementKind::Inference) continue;
      ++r.checks;
      try {
        Statement neg = negate_inference(pm, s, tol);
        auto p = pm.joint(neg.variables()).conditional(neg.consequent, neg.antecedent, tol.certainty);
        if (p && *p < 1.0 - tol.certainty) fail(r, c, "negated inference not certain", instance);
      } catch (const std::exception& e) {
        fail(r, c, format_statement(s, pm.names()) + ": " + e.what(), instance);
      }
    }
  };
  for (std::size_t c = 0; c < cases; ++c) {
    if (c % 2 == 0) {
      auto setup = gen::random_setup(rng, 4, 3);
      SetupProbabilities pm(setup, tol);
      check(pm, c, setup);
      ++setups;
    } else {
      auto model = gen::random_model(rng, 6);
      ModelProbabilities pm(model);
      check(pm, c, model);
      ++models;
    }
  }
  r.notes.push_back("setups " + std::to_string(setups) + ", models " + std::to_string(models) +
                    ", inferences negated " + std::to_string(r.checks));
}

void reduction_suite(Rng& rng, std::size_t cases, SuiteResult& r, const Tolerances& tol) {
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t qubits = c % 4 == 3 ? 3 : 2;
    const std::size_t dim = std::size_t{1} << qubits;
    // Roles: positions of c, b, a among the three agents in time order.
    std::vector<std::size_t> role{0, 1, 2};
    std::shuffle(role.begin(), role.end(), rng);
    std::vector<int> v(3);
    for (auto& x : v) x = static_cast<int>(rng() & 1U);
    std::vector<std::vector<int>> labels(3, std::vector<int>(dim));
    for (auto& l : labels) {
      for (auto& x : l) x = static_cast<int>(rng() & 1U);
    }
    // Keep basis indices consistent with c => b and b => a; index 0 carries c.
    labels[role[0]][0] = v[0];
    labels[role[1]][0] = v[1];
    labels[role[2]][0] = v[2];
    std::vector<bool> support(dim, false);
    support[0] = true;
    for (std::size_t k = 1; k < dim; ++k) {
      bool ok_cb = labels[role[0]][k] != v[0] || labels[role[1]][k] == v[1];
      bool ok_ba = labels[role[1]][k] != v[1] || labels[role[2]][k] == v[2];
      support[k] = ok_cb && ok_ba && (rng() % 10) < 7;
    }
    auto setup = gen::commuting_setup(rng, qubits, labels, random_amplitudes(rng, support));
    Statement cb = inference(role[0], v[0], role[1], v[1]);
    Statement ba = inference(role[1], v[1], role[2], v[2]);
    ++r.checks;
    try {
      Statement ca = reduce_triple(setup, cb, ba, tol);
      if (!(ca.antecedent == cb.antecedent) || !(ca.consequent == ba.consequent) ||
          ca.probability < 1.0 - tol.certainty) {
        fail(r, c, "reduced link malformed", setup);
      }
    } catch (const std::exception& e) {
      fail(r, c, e.what(), setup);
    }
  }
}

void symmetric_suite(Rng& rng, std::size_t cases, SuiteResult& r, const Tolerances& tol) {
  std::size_t searched = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    // Commuting equivalence chain e_1 <=> .. <=> e_N.
    const std::size_t n = 3 + c % 2;
    const std::size_t dim = 4;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> v(n);
    for (auto& x : v) x = static_cast<int>(rng() & 1U);
    std::vector<std::vector<int>> labels(n, std::vector<int>(dim));
    std::vector<bool> support(dim, false);
    for (std::size_t k = 0; k < dim; ++k) {
      int kind = k == 0 ? 0 : static_cast<int>(rng() % 3);  // 0 all true, 1 all false, 2 free
      support[k] = kind != 2;
      for (std::size_t i = 0; i < n; ++i) {
        labels[i][k] = kind == 0 ? v[i] : kind == 1 ? 1 - v[i] : static_cast<int>(rng() & 1U);
      }
    }
    auto setup = gen::commuting_setup(rng, 2, labels, random_amplitudes(rng, support));
    std::vector<Event> chain;
    for (auto i : order) chain.push_back(Event({{i, v[i]}}));
    ++r.checks;
    try {
      auto red = reduce_symmetric_chain(setup, chain, tol);
      if (red.contradiction_mass > tol.probability) fail(r, c, "endpoint contradiction mass", setup);
    } catch (const std::exception& e) {
      fail(r, c, e.what(), setup);
    }

    // No symmetric paradox in quantum setups.
    auto q = c % 2 == 0 ? gen::random_setup(rng, 4, 3) : gen::hardy_setup(rng);
    SetupProbabilities pm(q, tol);
    ++r.checks;
    ++searched;
    if (find_symmetric_paradox(pm, std::nullopt, tol)) fail(r, c, "symmetric paradox found", q);
  }
  for (const auto& s : {presets::fr_setup(), presets::kcbs_setup()}) {
    SetupProbabilities pm(s, tol);
    ++r.checks;
    ++searched;
    if (find_symmetric_paradox(pm, std::nullopt, tol)) fail(r, cases, "symmetric paradox found", s);
  }
  r.notes.push_back("quantum setups searched for symmetric paradoxes " + std::to_string(searched));
}

void endpoints_suite(Rng& rng, std::size_t cases, SuiteResult& r, const Tolerances& tol) {
  std::size_t certificates = 0;
  auto check = [&](const ProbabilityModel& pm, std::size_t c, const auto& instance) {
    auto cert = find_paradox(pm, std::nullopt, tol);
    ++r.checks;
    if (!cert) return;
    ++certificates;
    try {
      validate_certificate(pm, *cert, tol);
    } catch (const std::exception& e) {
      fail(r, c, e.what(), instance);
    }
    if (!check_deterministic_endpoints(*cert, tol)) {
      fail(r, c, "post-selection probability reaches 1", instance);
    }
    if (!has_directed_cycle(reference_graph(*cert, pm.names()))) {
      fail(r, c, "certificate graph is acyclic", instance);
    }
  };
  for (std::size_t c = 0; c < cases; ++c) {
    if (c % 3 == 0) {
      auto s = gen::hardy_setup(rng);
      check(SetupProbabilities(s, tol), c, s);
    } else if (c % 3 == 1) {
      auto s = gen::random_setup(rng, 4, 3);
      check(SetupProbabilities(s, tol), c, s);
    } else {
      std::size_t n = 3 + rng() % 4;
      GammaVector g(n, 1);
      std::size_t negs = 1 + 2 * (rng() % ((n + 1) / 2));
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      for (std::size_t k = 0; k < std::min(negs, n); ++k) g[idx[k]] = -1;
      if (std::count(g.begin(), g.end(), -1) % 2 == 0) g[idx[0]] = -g[idx[0]];
      auto m = to_empirical_model(extremal_model(n, g));
      check(ModelProbabilities(m), c, m);
    }
  }
  r.notes.push_back("certificates checked " + std::to_string(certificates));
  if (certificates == 0) r.failures.push_back("no certificate was produced");
}

void yablo_suite(Rng& rng, std::size_t cases, SuiteResult& r, const Tolerances& tol) {
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = c % 10 == 9 ? 4 : 2 + c % 2;
    std::vector<std::size_t> order;
    auto setup = gen::yablo_setup(rng, n, &order);
    std::vector<Statement> statements;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) statements.push_back(inference(order[x], 1, order[y], 0));
    }
    ++r.checks;
    try {
      auto verdict = check_yablo_blocked(setup, statements, tol);
      if (!verdict.statements_hold) fail(r, c, "Yablo statements do not hold", setup);
      if (verdict.order != order) fail(r, c, "Yablo order not recovered", setup);
      if (!verdict.blocked()) fail(r, c, "Yablo pattern not blocked", setup);
    } catch (const std::exception& e) {
      fail(r, c, e.what(), setup);
    }
    auto classical = presets::yablo_prefix(n);
    ++r.checks;
    if (consistent_assignments(classical).empty() ||
        has_directed_cycle(reference_graph(classical))) {
      r.failures.push_back("case " + std::to_string(c) + ": classical Yablo prefix misbehaves");
    }
  }
}

void theorem1_suite(Rng& rng, std::size_t cases, SuiteResult& r, const Tolerances& tol) {
  std::size_t noncontextual = 0, contextual = 0, paradoxes = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    auto setup = c % 4 == 3 ? gen::hardy_setup(rng) : gen::random_setup(rng, 4, 3);
    ++r.checks;
    try {
      auto report = cross_checked_report(model_from_setup(setup, tol), tol);
      SetupProbabilities pm(setup, tol);
      auto cert = find_paradox(pm, std::nullopt, tol);
      if (report.verdict == Verdict::NoncontextualLogically) {
        ++noncontextual;
        if (cert) fail(r, c, "paradox in a noncontextual model", setup);
      } else {
        ++contextual;
      }
      if (cert) ++paradoxes;
    } catch (const std::exception& e) {
      fail(r, c, e.what(), setup);
    }
  }
  r.notes.push_back("noncontextual " + std::to_string(noncontextual) + ", contextual " +
                    std::to_string(contextual) + ", with paradox " + std::to_string(paradoxes));
}

void oracle_suite(Rng& rng, std::size_t cases, SuiteResult& r, const Tolerances& tol) {
  std::size_t degenerate = 0, done = 0;
  std::map<Verdict, std::size_t> verdicts;
  for (std::size_t c = 0; done < cases; ++c) {
    auto model = gen::random_model(rng, 6);
    bool empty = false;
    for (std::size_t k = 0; k < model.scenario().contexts.size(); ++k) {
      empty = empty || possible_sections(model, k, tol).empty();
    }
    if (empty) {
      ++degenerate;
      continue;
    }
    ++done;
    ++r.checks;
    try {
      auto report = cross_checked_report(model, tol);
      ++verdicts[report.verdict];
      // Per-section agreement on witness existence.
      for (std::size_t k = 0; k < model.scenario().contexts.size(); ++k) {
        for (const auto& s : possible_sections(model, k, tol)) {
          ++r.checks;
          bool fast = has_global_section_extending(model, s, SearchEngine::Backtracking, tol).has_value();
          bool slow = has_global_section_extending(model, s, SearchEngine::Exhaustive, tol).has_value();
          if (fast != slow) fail(r, c, "engines disagree on a section", model);
        }
      }
    } catch (const std::exception& e) {
      fail(r, c, e.what(), model);
    }
  }
  r.cases = done;
  r.notes.push_back("noncontextual " + std::to_string(verdicts[Verdict::NoncontextualLogically]) +
                    ", logically " + std::to_string(verdicts[Verdict::LogicallyContextual]) +
                    ", strongly " + std::to_string(verdicts[Verdict::StronglyContextual]) +
                    ", degenerate skipped " + std::to_string(degenerate));
}

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{
      {"negation", 200, negation_suite},   {"reduction", 200, reduction_suite},
      {"symmetric", 200, symmetric_suite}, {"endpoints", 200, endpoints_suite},
      {"yablo", 200, yablo_suite},         {"theorem1", 200, theorem1_suite},
      {"oracle", 500, oracle_suite},
  };
  return all;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& s : suites()) out.push_back(s.name);
  return out;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t cases,
                      const Tolerances& tol) {
  for (const auto& s : suites()) {
    if (name != s.name) continue;
    SuiteResult r;
    r.name = name;
    r.seed = seed;
    r.cases = std::max(cases, s.min_cases);
    Rng rng(seed);
    s.run(rng, r.cases, r, tol);
    return r;
  }
  throw SchemaError("unknown suite '" + name + "'");
}

}  // namespace wfp
