#include "wfp/contextuality.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wfp/errors.hpp"
#include "wfp/wigner_setup.hpp"

namespace wfp {

EmpiricalModel::EmpiricalModel(MeasurementScenario scenario, std::vector<std::vector<double>> tables,
                               const Tolerances& tol)
    : scenario_(std::move(scenario)) {
  const std::size_t n = scenario_.variables.size();
  if (n == 0) throw SchemaError("model has no variables");
  if (scenario_.arities.size() != n) throw SchemaError("arities size mismatch");
  std::set<std::string> names(scenario_.variables.begin(), scenario_.variables.end());
  if (names.size() != n) throw SchemaError("duplicate variable name");
  for (int a : scenario_.arities) {
    if (a < 2) throw SchemaError("variable arity must be >= 2");
  }
  if (scenario_.contexts.empty()) throw SchemaError("model has no contexts");
  if (tables.size() != scenario_.contexts.size()) throw SchemaError("one table per context");

  std::vector<bool> covered(n, false);
  for (std::size_t c = 0; c < scenario_.contexts.size(); ++c) {
    auto& ctx = scenario_.contexts[c];
    if (ctx.empty()) throw SchemaError("empty context");
    std::sort(ctx.begin(), ctx.end());
    if (std::adjacent_find(ctx.begin(), ctx.end()) != ctx.end()) {
      throw SchemaError("context repeats a variable");
    }
    JointTable t;
    t.variables = ctx;
    for (auto v : ctx) {
      if (v >= n) throw SchemaError("context names an unknown variable");
      covered[v] = true;
      t.arities.push_back(scenario_.arities[v]);
    }
    if (tables[c].size() != table_size(t.arities)) {
      throw SchemaError("table " + std::to_string(c) + " has " + std::to_string(tables[c].size()) +
                        " entries, expected " + std::to_string(table_size(t.arities)));
    }
    double sum = 0.0;
    for (double p : tables[c]) {
      if (!std::isfinite(p) || p < -tol.probability) {
        throw InvariantViolation("table " + std::to_string(c) + " has a negative entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol.probability * std::max<double>(1.0, tables[c].size())) {
      throw InvariantViolation("table " + std::to_string(c) + " does not sum to 1");
    }
    t.probs = std::move(tables[c]);
    tables_.push_back(std::move(t));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!covered[v]) throw SchemaError("variable '" + scenario_.variables[v] + "' in no context");
  }

  for (std::size_t a = 0; a < tables_.size(); ++a) {
    for (std::size_t b = a + 1; b < tables_.size(); ++b) {
      VariableSet overlap;
      std::set_intersection(tables_[a].variables.begin(), tables_[a].variables.end(),
                            tables_[b].variables.begin(), tables_[b].variables.end(),
                            std::back_inserter(overlap));
      if (overlap.empty()) continue;
      auto ma = tables_[a].marginal(overlap), mb = tables_[b].marginal(overlap);
      for (std::size_t k = 0; k < ma.entry_count(); ++k) {
        if (std::abs(ma.probs[k] - mb.probs[k]) > tol.probability) {
          warnings_.push_back("contexts " + std::to_string(a) + " and " + std::to_string(b) +
                              " disagree on their overlap (disturbance)");
          break;
        }
      }
    }
  }
}

std::size_t EmpiricalModel::variable_index(const std::string& name) const {
  const auto& vs = scenario_.variables;
  auto it = std::find(vs.begin(), vs.end(), name);
  if (it == vs.end()) throw SchemaError("unknown variable '" + name + "'");
  return static_cast<std::size_t>(it - vs.begin());
}

Event Section::as_event() const {
  std::vector<std::pair<std::size_t, int>> vals;
  for (std::size_t i = 0; i < domain.size(); ++i) vals.emplace_back(domain[i], values[i]);
  return Event(std::move(vals));
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NoncontextualLogically: return "noncontextual-logically";
    case Verdict::LogicallyContextual: return "logically-contextual";
    case Verdict::StronglyContextual: return "strongly-contextual";
  }
  return "unknown";
}

std::vector<Section> possible_sections(const EmpiricalModel& model, std::size_t c,
                                       const Tolerances& tol) {
  const auto& tables = model.tables();
  const JointTable& own = tables.at(c);
  // Support of every overlap marginal, computed once.
  struct Overlap {
    VariableSet vars;
    std::vector<std::size_t> pos;  // positions inside own context
    JointTable marginal;
  };
  std::vector<Overlap> overlaps;
  for (const auto& other : tables) {
    Overlap o;
    std::set_intersection(own.variables.begin(), own.variables.end(), other.variables.begin(),
                          other.variables.end(), std::back_inserter(o.vars));
    if (o.vars.empty()) continue;
    for (auto v : o.vars) {
      o.pos.push_back(static_cast<std::size_t>(
          std::find(own.variables.begin(), own.variables.end(), v) - own.variables.begin()));
    }
    o.marginal = other.marginal(o.vars);
    overlaps.push_back(std::move(o));
  }
  std::vector<Section> out;
  for (std::size_t k = 0; k < own.entry_count(); ++k) {
    auto values = own.outcome(k);
    bool ok = true;
    for (const auto& o : overlaps) {
      std::vector<int> sub;
      for (auto p : o.pos) sub.push_back(values[p]);
      if (o.marginal.probs[o.marginal.entry_index(sub)] <= tol.certainty) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(Section{own.variables, std::move(values)});
  }
  return out;
}

namespace {

struct SectionIndex {
  std::vector<std::vector<Section>> allowed;  // per context
};

SectionIndex index_sections(const EmpiricalModel& model, const Tolerances& tol) {
  SectionIndex idx;
  for (std::size_t c = 0; c < model.tables().size(); ++c) {
    idx.allowed.push_back(possible_sections(model, c, tol));
  }
  return idx;
}

bool section_allowed(const std::vector<Section>& allowed, const std::vector<int>& global) {
  for (const auto& s : allowed) {
    bool hit = true;
    for (std::size_t i = 0; i < s.domain.size() && hit; ++i) hit = global[s.domain[i]] == s.values[i];
    if (hit) return true;
  }
  return false;
}

std::optional<std::vector<int>> exhaustive_search(const EmpiricalModel& model,
                                                  const SectionIndex& idx,
                                                  const std::vector<int>& fixed) {
  const auto& ar = model.scenario().arities;
  const std::size_t n = ar.size();
  std::size_t total = table_size(ar);
  if (total > (1u << 24)) throw SchemaError("exhaustive search space too large");
  std::vector<int> g(n, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t i = n; i-- > 0;) {
      g[i] = static_cast<int>(rest % static_cast<std::size_t>(ar[i]));
      rest /= static_cast<std::size_t>(ar[i]);
    }
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = fixed[i] < 0 || fixed[i] == g[i];
    for (std::size_t c = 0; c < idx.allowed.size() && ok; ++c) ok = section_allowed(idx.allowed[c], g);
    if (ok) return g;
  }
  return std::nullopt;
}

// Depth-first over variables in index order, values ascending, so the first
// solution is the lexicographically smallest. After each assignment every
// context touching the variable drops incompatible sections and every
// unassigned neighbour has its domain narrowed to values still supported.
class Backtracker {
 public:
  Backtracker(const EmpiricalModel& model, const SectionIndex& idx)
      : ar_(model.scenario().arities), idx_(idx) {
    touching_.resize(ar_.size());
    for (std::size_t c = 0; c < idx.allowed.size(); ++c) {
      for (auto v : model.tables()[c].variables) touching_[v].push_back(c);
    }
  }

  std::optional<std::vector<int>> run(const std::vector<int>& fixed) {
    const std::size_t n = ar_.size();
    assignment_.assign(n, -1);
    alive_.clear();
    for (const auto& a : idx_.allowed) {
      std::vector<std::size_t> all(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) all[i] = i;
      alive_.push_back(std::move(all));
    }
    domains_.assign(n, {});
    for (std::size_t v = 0; v < n; ++v) {
      for (int x = 0; x < ar_[v]; ++x) {
        if (fixed[v] < 0 || fixed[v] == x) domains_[v].push_back(x);
      }
    }
    if (!prune_all()) return std::nullopt;
    if (search(0)) return assignment_;
    return std::nullopt;
  }

 private:
  bool consistent(const Section& s) const {
    for (std::size_t i = 0; i < s.domain.size(); ++i) {
      int a = assignment_[s.domain[i]];
      if (a >= 0 && a != s.values[i]) return false;
      if (a < 0 && std::find(domains_[s.domain[i]].begin(), domains_[s.domain[i]].end(),
                             s.values[i]) == domains_[s.domain[i]].end()) {
        return false;
      }
    }
    return true;
  }

  // Filters a context's alive sections, then narrows neighbour domains.
  bool prune_context(std::size_t c, std::vector<std::size_t>& changed) {
    auto& alive = alive_[c];
    std::vector<std::size_t> keep;
    for (auto i : alive) {
      if (consistent(idx_.allowed[c][i])) keep.push_back(i);
    }
    alive = std::move(keep);
    if (alive.empty()) return false;
    const auto& dom = idx_.allowed[c][alive.front()].domain;
    for (std::size_t p = 0; p < dom.size(); ++p) {
      std::size_t v = dom[p];
      if (assignment_[v] >= 0) continue;
      std::vector<int> narrowed;
      for (int x : domains_[v]) {
        bool supported = std::any_of(alive.begin(), alive.end(), [&](std::size_t i) {
          return idx_.allowed[c][i].values[p] == x;
        });
        if (supported) narrowed.push_back(x);
      }
      if (narrowed.empty()) return false;
      if (narrowed.size() != domains_[v].size()) {
        domains_[v] = std::move(narrowed);
        changed.push_back(v);
      }
    }
    return true;
  }

  bool propagate(std::vector<std::size_t> queue) {
    while (!queue.empty()) {
      std::size_t v = queue.back();
      queue.pop_back();
      for (auto c : touching_[v]) {
        if (!prune_context(c, queue)) return false;
      }
    }
    return true;
  }

  bool prune_all() {
    std::vector<std::size_t> all(ar_.size());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
    return propagate(all);
  }

  bool search(std::size_t v) {
    if (v == ar_.size()) return true;
    auto saved_alive = alive_;
    auto saved_domains = domains_;
    for (int x : saved_domains[v]) {
      assignment_[v] = x;
      domains_[v] = {x};
      if (propagate({v}) && search(v + 1)) return true;
      alive_ = saved_alive;
      domains_ = saved_domains;
    }
    assignment_[v] = -1;
    return false;
  }

  const std::vector<int>& ar_;
  const SectionIndex& idx_;
  std::vector<std::vector<std::size_t>> touching_;
  std::vector<int> assignment_;
  std::vector<std::vector<std::size_t>> alive_;
  std::vector<std::vector<int>> domains_;
};

std::vector<int> fixed_from(const EmpiricalModel& model, const Section& s) {
  std::vector<int> fixed(model.variable_count(), -1);
  if (s.domain.size() != s.values.size()) throw SchemaError("section domain/value mismatch");
  for (std::size_t i = 0; i < s.domain.size(); ++i) {
    if (s.domain[i] >= fixed.size()) throw SchemaError("section names an unknown variable");
    if (s.values[i] < 0 || s.values[i] >= model.scenario().arities[s.domain[i]]) {
      throw SchemaError("section value out of range");
    }
    fixed[s.domain[i]] = s.values[i];
  }
  return fixed;
}

std::optional<std::vector<int>> search_with(const EmpiricalModel& model, const SectionIndex& idx,
                                            const Section& s, SearchEngine engine) {
  auto fixed = fixed_from(model, s);
  if (engine == SearchEngine::Exhaustive) return exhaustive_search(model, idx, fixed);
  Backtracker bt(model, idx);
  return bt.run(fixed);
}

}  // namespace

std::optional<std::vector<int>> has_global_section_extending(const EmpiricalModel& model,
                                                             const Section& s,
                                                             SearchEngine engine,
                                                             const Tolerances& tol) {
  return search_with(model, index_sections(model, tol), s, engine);
}

ContextualityReport is_logically_contextual(const EmpiricalModel& model, SearchEngine engine,
                                            const Tolerances& tol) {
  SectionIndex idx = index_sections(model, tol);
  ContextualityReport report;
  bool some_context_all_fail = false;
  for (std::size_t c = 0; c < idx.allowed.size(); ++c) {
    if (idx.allowed[c].empty()) {
      throw InvariantViolation("context " + std::to_string(c) + " has no possible section");
    }
    bool all_fail = true;
    for (const auto& s : idx.allowed[c]) {
      ++report.section_count;
      if (search_with(model, idx, s, engine)) {
        all_fail = false;
      } else {
        report.failing_sections.push_back(s);
      }
    }
    some_context_all_fail = some_context_all_fail || all_fail;
  }
  std::sort(report.failing_sections.begin(), report.failing_sections.end());
  report.global_section = search_with(model, idx, Section{}, engine);
  if (report.failing_sections.empty()) {
    report.verdict = Verdict::NoncontextualLogically;
  } else if (some_context_all_fail) {
    report.verdict = Verdict::StronglyContextual;
  } else {
    report.verdict = Verdict::LogicallyContextual;
  }
  return report;
}

ContextualityReport cross_checked_report(const EmpiricalModel& model, const Tolerances& tol) {
  auto fast = is_logically_contextual(model, SearchEngine::Backtracking, tol);
  auto slow = is_logically_contextual(model, SearchEngine::Exhaustive, tol);
  if (fast.verdict != slow.verdict || fast.failing_sections != slow.failing_sections ||
      fast.global_section != slow.global_section) {
    throw EngineDisagreement("backtracking and exhaustive section search disagree");
  }
  return fast;
}

EmpiricalModel model_from_setup(const MultiAgentSetup& setup, const Tolerances& tol) {
  MeasurementScenario sc;
  sc.variables = setup.agent_names();
  sc.arities = setup.arities();
  sc.contexts = contexts(setup, tol);
  sc.state_ref = setup.name();
  std::vector<std::vector<double>> tables;
  for (const auto& c : sc.contexts) {
    auto probs = joint_distribution(setup, c).probs;
    for (double& p : probs) p = std::max(p, 0.0);
    tables.push_back(std::move(probs));
  }
  return EmpiricalModel(std::move(sc), std::move(tables), tol);
}

}  // namespace wfp
