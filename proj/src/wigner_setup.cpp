#include "wfp/wigner_setup.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>

#include "wfp/errors.hpp"

namespace wfp {

using hilbert::Matrix;
using hilbert::Operator;
using hilbert::Vector;

namespace {

Matrix identity(std::size_t d) {
  auto n = static_cast<Eigen::Index>(d);
  return Matrix::Identity(n, n);
}

}  // namespace

MultiAgentSetup::MultiAgentSetup(hilbert::Layout layout, hilbert::StateVector initial_state,
                                 std::vector<Measurement> agents,
                                 std::map<std::string, std::size_t> memory_init, std::string name,
                                 const Tolerances& tol)
    : name_(std::move(name)),
      layout_(std::move(layout)),
      initial_state_(std::move(initial_state)),
      agents_(std::move(agents)),
      memory_init_(std::move(memory_init)) {
  if (agents_.empty()) throw SchemaError("setup has no agents");

  std::set<std::string> names, memories;
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const auto& m = agents_[i];
    if (!names.insert(m.agent).second) throw SchemaError("duplicate agent '" + m.agent + "'");
    if (!layout_.contains(m.memory)) {
      throw SchemaError("agent '" + m.agent + "': memory '" + m.memory + "' not in layout");
    }
    if (!memories.insert(m.memory).second) {
      throw SchemaError("memory '" + m.memory + "' shared by two agents");
    }
    if (i > 0 && m.time <= agents_[i - 1].time) {
      throw SchemaError("agents must be listed in strictly increasing time");
    }
  }
  for (const auto& [mem, v] : memory_init_) {
    if (!memories.count(mem)) throw SchemaError("memory_init names unknown memory '" + mem + "'");
    if (v >= layout_.dim_of(mem)) throw SchemaError("memory_init out of range for '" + mem + "'");
  }

  // A measurement may touch systems and the memories of earlier agents only.
  auto check_targets = [&](std::size_t i, const std::vector<std::string>& targets,
                           const char* what) {
    for (const auto& t : targets) {
      if (!layout_.contains(t)) {
        throw SchemaError("agent '" + agents_[i].agent + "': " + what + " target '" + t +
                          "' not in layout");
      }
      if (!memories.count(t)) continue;
      bool earlier = false;
      for (std::size_t j = 0; j < i; ++j) earlier = earlier || agents_[j].memory == t;
      if (!earlier) {
        throw SchemaError("agent '" + agents_[i].agent + "': " + what + " target '" + t +
                          "' is not the memory of an earlier agent");
      }
    }
  };

  std::vector<std::string> systems;
  for (const auto& s : layout_.subsystems()) {
    if (!memories.count(s.name)) systems.push_back(s.name);
  }
  if (systems.empty()) throw SchemaError("layout has no system factors");
  if (!(initial_state_.layout() == layout_.sublayout(systems))) {
    throw SchemaError("initial state must cover the system factors in layout order");
  }

  std::vector<std::pair<std::vector<std::string>, Vector>> pieces;
  pieces.emplace_back(systems, initial_state_.amplitudes());
  for (const auto& m : agents_) {
    std::size_t md = layout_.dim_of(m.memory);
    Vector e = Vector::Zero(static_cast<Eigen::Index>(md));
    auto it = memory_init_.find(m.memory);
    e(static_cast<Eigen::Index>(it == memory_init_.end() ? 0 : it->second)) = 1.0;
    pieces.emplace_back(std::vector<std::string>{m.memory}, e);
  }
  psi0_ = hilbert::product_state(layout_, pieces);

  const std::size_t D = layout_.total_dim();
  Matrix before = identity(D);  // V_{<i}
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const auto& m = agents_[i];
    check_targets(i, m.targets, "measurement");
    if (m.targets.empty()) throw SchemaError("agent '" + m.agent + "' measures nothing");
    if (std::find(m.targets.begin(), m.targets.end(), m.memory) != m.targets.end()) {
      throw SchemaError("agent '" + m.agent + "' measures its own memory");
    }
    if (m.projectors.size() < 2) {
      throw SchemaError("agent '" + m.agent + "' needs at least two outcomes");
    }
    if (!m.outcome_labels.empty() && m.outcome_labels.size() != m.projectors.size()) {
      throw SchemaError("agent '" + m.agent + "': outcome_labels size mismatch");
    }
    hilbert::Layout local = layout_.sublayout(m.targets);
    Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(local.total_dim()),
                              static_cast<Eigen::Index>(local.total_dim()));
    for (const auto& p : m.projectors) {
      if (p.layout().total_dim() != local.total_dim()) {
        throw SchemaError("agent '" + m.agent + "': projector dimension mismatch");
      }
      if (!hilbert::is_projector(p.matrix(), tol.algebraic)) {
        throw InvariantViolation("agent '" + m.agent + "': outcome operator is not a projector");
      }
      sum += p.matrix();
    }
    if (hilbert::max_abs(sum - identity(local.total_dim())) > tol.algebraic) {
      throw InvariantViolation("agent '" + m.agent + "': projectors do not sum to identity");
    }

    Matrix pre = identity(D);
    if (m.pre_unitary) {
      check_targets(i, m.pre_unitary->targets, "pre-unitary");
      const auto& pt = m.pre_unitary->targets;
      if (std::find(pt.begin(), pt.end(), m.memory) != pt.end()) {
        throw SchemaError("agent '" + m.agent + "': pre-unitary acts on its own memory");
      }
      if (!hilbert::is_unitary(m.pre_unitary->op.matrix(), tol.algebraic)) {
        throw InvariantViolation("agent '" + m.agent + "': pre-unitary is not unitary");
      }
      pre = hilbert::embed(m.pre_unitary->op, layout_, pt).matrix();
    }
    Matrix update = hilbert::controlled_shift(m.projectors, layout_, m.targets, m.memory).matrix();

    std::size_t md = layout_.dim_of(m.memory);
    auto it = memory_init_.find(m.memory);
    std::size_t m0 = it == memory_init_.end() ? 0 : it->second;
    std::vector<std::string> with_mem = m.targets;
    with_mem.push_back(m.memory);
    hilbert::Layout local_mem = layout_.sublayout(with_mem);
    std::vector<Matrix> records, primed;
    for (std::size_t k = 0; k < m.projectors.size(); ++k) {
      auto r = static_cast<Eigen::Index>((m0 + k) % md);
      Matrix loc = Matrix::Zero(static_cast<Eigen::Index>(local_mem.total_dim()),
                                static_cast<Eigen::Index>(local_mem.total_dim()));
      // Kronecker product P_k (x) |m0+k><m0+k|
      const Matrix& pk = m.projectors[k].matrix();
      for (Eigen::Index a = 0; a < pk.rows(); ++a) {
        for (Eigen::Index b = 0; b < pk.cols(); ++b) {
          loc(a * static_cast<Eigen::Index>(md) + r, b * static_cast<Eigen::Index>(md) + r) =
              pk(a, b);
        }
      }
      records.push_back(
          hilbert::embed(Operator::unchecked(local_mem, loc, hilbert::OperatorKind::Projector),
                         layout_, with_mem)
              .matrix());
      Matrix pk_full =
          hilbert::embed(Operator::unchecked(local, pk, hilbert::OperatorKind::Projector),
                         layout_, m.targets)
              .matrix();
      if (k + 1 < m.projectors.size()) {
        Matrix frame = m.pre_unitary ? Matrix(pre * before) : before;
        primed.push_back(frame.adjoint() * pk_full * frame);
      } else {
        // The families are complete, so the last one is fixed by the others.
        Matrix rest = identity(D);
        for (const auto& f : primed) rest -= f;
        primed.push_back(std::move(rest));
      }
    }
    Matrix w = m.pre_unitary ? Matrix(update * pre) : update;
    before = w * before;
    pre_.push_back(std::move(pre));
    update_.push_back(std::move(update));
    evolution_.push_back(std::move(w));
    record_.push_back(std::move(records));
    primed_.push_back(std::move(primed));
  }
}

bool MultiAgentSetup::primed_commute(std::size_t a, std::size_t b, double eps) const {
  const std::size_t n = agents_.size();
  if (a >= n || b >= n) throw SchemaError("unknown agent index");
  if (commute_eps_ != eps) {
    commute_cache_.assign(n, std::vector<signed char>(n, -1));
    commute_eps_ = eps;
  }
  signed char& slot = commute_cache_[a][b];
  if (slot >= 0) return slot == 1;
  // Complete families of Hermitian projectors: the last member of each is
  // implied by the others, and [P, Q] = PQ - (PQ)^dagger.
  bool ok = true;
  const auto& fa = primed_[a];
  const auto& fb = primed_[b];
  for (std::size_t x = 0; ok && x + 1 < fa.size(); ++x) {
    for (std::size_t y = 0; ok && y + 1 < fb.size(); ++y) {
      Matrix pq = fa[x] * fb[y];
      ok = hilbert::max_abs(pq - pq.adjoint()) <= eps;
    }
  }
  slot = commute_cache_[b][a] = ok ? 1 : 0;
  return ok;
}

std::size_t MultiAgentSetup::agent_index(const std::string& agent) const {
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    if (agents_[i].agent == agent) return i;
  }
  throw SchemaError("unknown agent '" + agent + "'");
}

std::vector<int> MultiAgentSetup::arities() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < agents_.size(); ++i) out.push_back(arity(i));
  return out;
}

std::vector<std::string> MultiAgentSetup::agent_names() const {
  std::vector<std::string> out;
  for (const auto& a : agents_) out.push_back(a.agent);
  return out;
}

int MultiAgentSetup::outcome_value(std::size_t agent, const std::string& label) const {
  const auto& labels = agents_.at(agent).outcome_labels;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == label) return static_cast<int>(k);
  }
  try {
    std::size_t used = 0;
    int v = std::stoi(label, &used);
    if (used == label.size() && v >= 0 && v < arity(agent)) return v;
  } catch (const std::exception&) {
  }
  throw SchemaError("agent '" + agents_[agent].agent + "' has no outcome '" + label + "'");
}

std::string MultiAgentSetup::outcome_label(std::size_t agent, int value) const {
  const auto& labels = agents_.at(agent).outcome_labels;
  if (!labels.empty()) return labels.at(static_cast<std::size_t>(value));
  return std::to_string(value);
}

SettingVector default_settings(const MultiAgentSetup& setup, const VariableSet& mentioned) {
  SettingVector s(setup.agent_count(), false);
  for (auto i : mentioned) s.at(i) = true;
  return s;
}

std::vector<Branch> simulate(const MultiAgentSetup& setup, const SettingVector& settings) {
  const std::size_t n = setup.agent_count();
  if (settings.size() != n) throw SchemaError("setting vector has wrong length");
  std::vector<Branch> branches(1);
  branches[0].outcomes.assign(n, std::nullopt);
  branches[0].state = setup.full_initial_state();
  branches[0].probability = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Branch> next;
    for (auto& b : branches) {
      Vector evolved = setup.evolution(i) * b.state;
      if (!settings[i]) {
        b.state = std::move(evolved);
        next.push_back(std::move(b));
        continue;
      }
      for (int k = 0; k < setup.arity(i); ++k) {
        Branch child;
        child.outcomes = b.outcomes;
        child.outcomes[i] = k;
        child.state = setup.record_projector(i, k) * evolved;
        child.probability = child.state.squaredNorm();
        next.push_back(std::move(child));
      }
    }
    branches = std::move(next);
  }
  return branches;
}

namespace {

bool branch_holds(const Branch& b, const Event& e) {
  bool all = true;
  for (const auto& [var, val] : e.values) {
    if (!b.outcomes[var]) throw PreconditionError("event mentions an unrecorded agent");
    if (*b.outcomes[var] != val) all = false;
  }
  return all != e.negated;
}

}  // namespace

std::optional<double> predict_with_settings(const MultiAgentSetup& setup, const Event& target,
                                            const Event& condition, const SettingVector& settings,
                                            const Tolerances& tol) {
  VariableSet mentioned = target.variables();
  for (auto v : condition.variables()) mentioned.push_back(v);
  for (auto v : mentioned) {
    if (v >= setup.agent_count()) throw SchemaError("event names an unknown agent");
    if (!settings.at(v)) throw PreconditionError("mentioned agent has s_i = 0");
  }
  auto branches = simulate(setup, settings);
  double pc = 0.0, pj = 0.0;
  for (const auto& b : branches) {
    if (!branch_holds(b, condition)) continue;
    pc += b.probability;
    if (branch_holds(b, target)) pj += b.probability;
  }
  if (pc <= tol.certainty) return std::nullopt;
  return pj / pc;
}

std::optional<double> predict(const MultiAgentSetup& setup, const Event& target,
                              const Event& condition, const Tolerances& tol) {
  VariableSet mentioned = target.variables();
  for (auto v : condition.variables()) mentioned.push_back(v);
  for (auto v : mentioned) {
    if (v >= setup.agent_count()) throw SchemaError("event names an unknown agent");
  }
  return predict_with_settings(setup, target, condition, default_settings(setup, mentioned),
                               tol);
}

namespace {

JointTable empty_table(const MultiAgentSetup& setup, const VariableSet& vars) {
  JointTable t;
  t.variables = vars;
  for (auto v : vars) {
    if (v >= setup.agent_count()) throw SchemaError("unknown agent index");
    t.arities.push_back(setup.arity(v));
  }
  std::set<std::size_t> uniq(vars.begin(), vars.end());
  if (uniq.size() != vars.size()) throw SchemaError("repeated agent in variable set");
  t.probs.assign(table_size(t.arities), 0.0);
  return t;
}

}  // namespace

JointTable joint_distribution(const MultiAgentSetup& setup, const VariableSet& vars) {
  JointTable t = empty_table(setup, vars);
  auto branches = simulate(setup, default_settings(setup, vars));
  std::vector<int> o(vars.size());
  for (const auto& b : branches) {
    for (std::size_t i = 0; i < vars.size(); ++i) o[i] = *b.outcomes[vars[i]];
    t.probs[t.entry_index(o)] += b.probability;
  }
  return t;
}

JointTable primed_distribution(const MultiAgentSetup& setup, const VariableSet& vars) {
  JointTable t = empty_table(setup, vars);
  VariableSet order = vars;
  std::sort(order.begin(), order.end());
  for (std::size_t k = 0; k < t.entry_count(); ++k) {
    auto o = t.outcome(k);
    Vector v = setup.full_initial_state();
    for (auto agent : order) {
      auto pos = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), agent) -
                                          vars.begin());
      v = setup.primed(agent)[static_cast<std::size_t>(o[pos])] * v;
    }
    t.probs[k] = v.squaredNorm();
  }
  return t;
}

std::vector<std::vector<Operator>> effective_projectors(const MultiAgentSetup& setup,
                                                        const VariableSet& subset) {
  std::vector<std::vector<Operator>> out;
  for (auto i : subset) {
    if (i >= setup.agent_count()) throw SchemaError("unknown agent index");
    std::vector<Operator> family;
    for (const auto& m : setup.primed(i)) {
      family.push_back(Operator::unchecked(setup.layout(), m, hilbert::OperatorKind::Projector));
    }
    out.push_back(std::move(family));
  }
  return out;
}

namespace {

bool tables_match(const JointTable& a, const JointTable& b, double eps) {
  for (std::size_t k = 0; k < a.entry_count(); ++k) {
    if (std::abs(a.probs[k] - b.probs[k]) > eps) return false;
  }
  return true;
}

bool distributions_agree(const MultiAgentSetup& setup, const VariableSet& subset,
                         const Tolerances& tol) {
  JointTable joint = joint_distribution(setup, subset);
  if (!tables_match(joint, primed_distribution(setup, subset), tol.probability)) return false;
  // Each marginal must match the prediction made with only that agent mentioned.
  for (auto v : subset) {
    if (!tables_match(joint.marginal({v}), joint_distribution(setup, {v}), tol.probability)) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool compatible(const MultiAgentSetup& setup, const VariableSet& subset, const Tolerances& tol) {
  for (std::size_t x = 0; x < subset.size(); ++x) {
    for (std::size_t y = x + 1; y < subset.size(); ++y) {
      if (subset[x] == subset[y]) throw SchemaError("repeated agent in subset");
      if (!setup.primed_commute(subset[x], subset[y], tol.algebraic)) return false;
    }
  }
  return distributions_agree(setup, subset, tol);
}

std::vector<VariableSet> contexts(const MultiAgentSetup& setup, const Tolerances& tol) {
  const std::size_t n = setup.agent_count();
  if (n > 20) throw SchemaError("too many agents for context enumeration");
  std::vector<std::vector<bool>> commute(n, std::vector<bool>(n, true));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      commute[a][b] = commute[b][a] = setup.primed_commute(a, b, tol.algebraic);
    }
  }
  std::vector<std::uint32_t> good;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    VariableSet s;
    bool clique = true;
    for (std::size_t i = 0; i < n && clique; ++i) {
      if (!(mask >> i & 1u)) continue;
      for (auto j : s) clique = clique && commute[i][j];
      s.push_back(i);
    }
    if (clique && distributions_agree(setup, s, tol)) good.push_back(mask);
  }
  std::vector<VariableSet> out;
  for (auto mask : good) {
    bool maximal = std::none_of(good.begin(), good.end(), [&](std::uint32_t other) {
      return other != mask && (other & mask) == mask;
    });
    if (!maximal) continue;
    VariableSet s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1u) s.push_back(i);
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Event parse_event(const MultiAgentSetup& setup, const std::string& text) {
  std::vector<std::pair<std::size_t, int>> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw SchemaError("expected agent=value in '" + item + "'");
    std::size_t agent = setup.agent_index(item.substr(0, eq));
    vals.emplace_back(agent, setup.outcome_value(agent, item.substr(eq + 1)));
  }
  return Event(std::move(vals));
}

std::string format_event(const std::vector<std::string>& names, const Event& e,
                         const std::vector<std::vector<std::string>>& labels) {
  std::string body;
  for (const auto& [var, val] : e.values) {
    if (!body.empty()) body += ",";
    body += names.at(var) + "=";
    if (var < labels.size() && !labels[var].empty()) {
      body += labels[var].at(static_cast<std::size_t>(val));
    } else {
      body += std::to_string(val);
    }
  }
  return e.negated ? "!(" + body + ")" : body;
}

}  // namespace wfp
