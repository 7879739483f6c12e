#include "wfp/ncycle.hpp"

#include <algorithm>
#include <cmath>

#include "wfp/contextuality.hpp"
#include "wfp/errors.hpp"

namespace wfp {

NCycleModel::NCycleModel(std::size_t n, std::vector<std::array<double, 4>> edges,
                         std::vector<std::string> names, const Tolerances& tol)
    : edges_(std::move(edges)), names_(std::move(names)) {
  if (n < 3) throw SchemaError("n-cycle needs n >= 3");
  if (edges_.size() != n) throw SchemaError("n-cycle needs one table per edge");
  if (names_.empty()) {
    for (std::size_t i = 0; i < n; ++i) names_.push_back("X" + std::to_string(i + 1));
  }
  if (names_.size() != n) throw SchemaError("n-cycle names size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (double p : edges_[i]) {
      if (!std::isfinite(p) || p < -tol.probability) {
        throw InvariantViolation("edge " + std::to_string(i) + " has a negative entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 4 * tol.probability) {
      throw InvariantViolation("edge " + std::to_string(i) + " does not sum to 1");
    }
  }
}

void validate_gamma(const GammaVector& gamma, std::size_t n) {
  if (gamma.size() != n) throw SchemaError("gamma has wrong length");
  int negatives = 0;
  for (int g : gamma) {
    if (g != 1 && g != -1) throw SchemaError("gamma entries must be +1 or -1");
    negatives += g == -1;
  }
  if (negatives % 2 == 0) throw SchemaError("gamma needs an odd number of -1 entries");
}

double expectation(const NCycleModel& model, std::size_t i) {
  const auto& e = model.edge(i);
  return (e[0] + e[3]) - (e[1] + e[2]);
}

double omega(const NCycleModel& model, const GammaVector& gamma) {
  validate_gamma(gamma, model.n());
  double s = 0.0;
  for (std::size_t i = 0; i < model.n(); ++i) s += gamma[i] * expectation(model, i);
  return s;
}

OmegaMax max_omega(const NCycleModel& model) {
  const std::size_t n = model.n();
  GammaVector g(n);
  int negatives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = expectation(model, i) < 0 ? -1 : 1;
    negatives += g[i] == -1;
  }
  if (negatives % 2 == 0) {
    // Flip the least costly sign; prefer the highest index on ties.
    std::size_t best = 0;
    double cost = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      double c = std::abs(expectation(model, i));
      if (c <= cost) {
        cost = c;
        best = i;
      }
    }
    g[best] = -g[best];
  }
  return {omega(model, g), g};
}

std::optional<GammaVector> is_extremal_vertex(const NCycleModel& model, const Tolerances& tol) {
  GammaVector g;
  int negatives = 0;
  for (std::size_t i = 0; i < model.n(); ++i) {
    double e = expectation(model, i);
    if (std::abs(e - 1.0) <= tol.certainty) {
      g.push_back(1);
    } else if (std::abs(e + 1.0) <= tol.certainty) {
      g.push_back(-1);
      ++negatives;
    } else {
      return std::nullopt;
    }
  }
  if (negatives % 2 == 0) return std::nullopt;
  return g;
}

NCycleModel extremal_model(std::size_t n, const GammaVector& gamma) {
  validate_gamma(gamma, n);
  std::vector<std::array<double, 4>> edges;
  for (int g : gamma) {
    edges.push_back(g == 1 ? std::array<double, 4>{0.5, 0.0, 0.0, 0.5}
                           : std::array<double, 4>{0.0, 0.5, 0.5, 0.0});
  }
  return NCycleModel(n, std::move(edges));
}

namespace {

std::optional<BinaryChain> propagate_chain(const NCycleModel& model, const GammaVector& gamma,
                                           int start, const Tolerances& tol) {
  const std::size_t n = model.n();
  BinaryChain chain;
  int x = start;
  chain.nodes.emplace_back(0, x);
  for (std::size_t i = 0; i < n; ++i) {
    int next = gamma[i] == 1 ? x : 1 - x;
    const auto& e = model.edge(i);
    double px = e[2 * x] + e[2 * x + 1];
    if (px <= tol.certainty) return std::nullopt;
    double p = e[2 * x + next] / px;
    if (p < 1.0 - tol.certainty) return std::nullopt;
    chain.probabilities.push_back(p);
    x = next;
    chain.nodes.emplace_back((i + 1) % n, x);
  }
  if (chain.nodes.back().second == start) return std::nullopt;
  return chain;
}

}  // namespace

std::optional<std::pair<BinaryChain, BinaryChain>> find_ps_free_paradox(const NCycleModel& model,
                                                                        const Tolerances& tol) {
  auto gamma = is_extremal_vertex(model, tol);
  if (!gamma) return std::nullopt;
  auto c0 = propagate_chain(model, *gamma, 0, tol);
  auto c1 = propagate_chain(model, *gamma, 1, tol);
  if (!c0 || !c1) {
    throw VerificationFailure("extremal vertex without a certain implication cycle");
  }
  return std::make_pair(*c0, *c1);
}

std::optional<NCycleModel> ncycle_from_model(const EmpiricalModel& model, const Tolerances& tol) {
  const auto& sc = model.scenario();
  const std::size_t n = sc.variables.size();
  if (n < 3 || sc.contexts.size() != n) return std::nullopt;
  for (int a : sc.arities) {
    if (a != 2) return std::nullopt;
  }
  std::vector<std::vector<std::size_t>> nbr(n);
  for (const auto& c : sc.contexts) {
    if (c.size() != 2) return std::nullopt;
    nbr[c[0]].push_back(c[1]);
    nbr[c[1]].push_back(c[0]);
  }
  for (auto& v : nbr) {
    if (v.size() != 2) return std::nullopt;
    std::sort(v.begin(), v.end());
  }
  std::vector<std::size_t> order{0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  while (order.size() < n) {
    std::size_t cur = order.back();
    auto it = std::find_if(nbr[cur].begin(), nbr[cur].end(), [&](std::size_t v) { return !seen[v]; });
    if (it == nbr[cur].end()) return std::nullopt;  // several disjoint cycles
    seen[*it] = true;
    order.push_back(*it);
  }

  std::vector<std::array<double, 4>> edges;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a = order[i], b = order[(i + 1) % n];
    names.push_back(sc.variables[a]);
    VariableSet key{std::min(a, b), std::max(a, b)};
    auto c = static_cast<std::size_t>(std::find(sc.contexts.begin(), sc.contexts.end(), key) -
                                      sc.contexts.begin());
    const auto& t = model.table(c);
    std::array<double, 4> e{};
    for (int xa = 0; xa < 2; ++xa) {
      for (int xb = 0; xb < 2; ++xb) {
        std::vector<int> o = a < b ? std::vector<int>{xa, xb} : std::vector<int>{xb, xa};
        e[static_cast<std::size_t>(2 * xa + xb)] = t.probs[t.entry_index(o)];
      }
    }
    edges.push_back(e);
  }
  return NCycleModel(n, std::move(edges), std::move(names), tol);
}

EmpiricalModel to_empirical_model(const NCycleModel& model) {
  MeasurementScenario sc;
  const std::size_t n = model.n();
  sc.variables = model.names();
  sc.arities.assign(n, 2);
  std::vector<std::vector<double>> tables;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a = i, b = (i + 1) % n;
    const auto& e = model.edge(i);
    if (a < b) {
      sc.contexts.push_back({a, b});
      tables.push_back({e[0], e[1], e[2], e[3]});
    } else {
      sc.contexts.push_back({b, a});
      tables.push_back({e[0], e[2], e[1], e[3]});
    }
  }
  sc.state_ref = "n-cycle";
  return EmpiricalModel(std::move(sc), std::move(tables));
}

}  // namespace wfp
