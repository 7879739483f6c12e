#include "wfp/reasoning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>

#include "wfp/errors.hpp"

namespace wfp {

using hilbert::Matrix;

bool ProbabilityModel::within_context(const VariableSet& vars) const {
  for (const auto& c : contexts()) {
    if (std::includes(c.begin(), c.end(), vars.begin(), vars.end())) return true;
  }
  return false;
}

namespace {

// All nonempty subsets of every context, each sorted, without repeats.
std::set<VariableSet> context_subsets(const std::vector<VariableSet>& contexts) {
  std::set<VariableSet> out;
  for (const auto& c : contexts) {
    if (c.size() > 20) throw SchemaError("context too large to enumerate");
    for (std::uint32_t mask = 1; mask < (1u << c.size()); ++mask) {
      VariableSet s;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (mask >> i & 1u) s.push_back(c[i]);
      }
      out.insert(std::move(s));
    }
  }
  return out;
}

VariableSet sorted_union(const VariableSet& a, const VariableSet& b) {
  VariableSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

SetupProbabilities::SetupProbabilities(const MultiAgentSetup& setup, const Tolerances& tol)
    : setup_(setup), contexts_(wfp::contexts(setup, tol)) {
  for (const auto& s : context_subsets(contexts_)) tables_.emplace(s, joint_distribution(setup_, s));
}

JointTable SetupProbabilities::joint(const VariableSet& vars) const {
  auto it = tables_.find(vars);
  if (it != tables_.end()) return it->second;
  return joint_distribution(setup_, vars);
}

std::vector<std::vector<std::string>> SetupProbabilities::outcome_labels() const {
  std::vector<std::vector<std::string>> out;
  for (const auto& a : setup_.agents()) out.push_back(a.outcome_labels);
  return out;
}

JointTable ModelProbabilities::joint(const VariableSet& vars) const {
  VariableSet sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& t : model_.tables()) {
    if (std::includes(t.variables.begin(), t.variables.end(), sorted.begin(), sorted.end())) {
      return t.marginal(vars);
    }
  }
  throw PreconditionError("variables are not jointly measured in any context");
}

VariableSet Statement::variables() const {
  return sorted_union(antecedent.variables(), consequent.variables());
}

bool Statement::operator<(const Statement& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (!(antecedent == o.antecedent)) return antecedent < o.antecedent;
  return consequent < o.consequent;
}

std::vector<Statement> derive_statements(const ProbabilityModel& pm, const Tolerances& tol) {
  std::vector<Statement> out;
  const std::size_t n = pm.variable_count();
  for (const auto& u : context_subsets(pm.contexts())) {
    JointTable t = pm.joint(u);
    SettingVector settings(n, false);
    for (auto v : u) settings[v] = true;

    for (std::size_t k = 0; k < t.entry_count(); ++k) {
      if (t.probs[k] <= tol.certainty) continue;
      auto o = t.outcome(k);
      std::vector<std::pair<std::size_t, int>> vals;
      for (std::size_t i = 0; i < u.size(); ++i) vals.emplace_back(u[i], o[i]);
      out.push_back({StatementKind::Outcome, Event{}, Event(std::move(vals)), t.probs[k], settings});
    }

    // Split u into antecedent (mask bits) and consequent (the rest).
    for (std::uint32_t mask = 1; mask + 1 < (1u << u.size()); ++mask) {
      VariableSet lv, jv;
      for (std::size_t i = 0; i < u.size(); ++i) (mask >> i & 1u ? lv : jv).push_back(u[i]);
      JointTable tl = t.marginal(lv);
      for (std::size_t a = 0; a < tl.entry_count(); ++a) {
        if (tl.probs[a] <= tol.certainty) continue;
        auto lo = tl.outcome(a);
        std::vector<std::pair<std::size_t, int>> lvals;
        for (std::size_t i = 0; i < lv.size(); ++i) lvals.emplace_back(lv[i], lo[i]);
        Event ante(lvals);
        for (std::size_t k = 0; k < t.entry_count(); ++k) {
          auto o = t.outcome(k);
          bool match = true;
          std::vector<std::pair<std::size_t, int>> jvals;
          for (std::size_t i = 0; i < u.size(); ++i) {
            if (mask >> i & 1u) {
              match = match && ante.value_of(u[i]) == o[i];
            } else {
              jvals.emplace_back(u[i], o[i]);
            }
          }
          if (!match) continue;
          double p = t.probs[k] / tl.probs[a];
          if (p >= 1.0 - tol.certainty) {
            out.push_back({StatementKind::Inference, ante, Event(std::move(jvals)), p, settings});
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Statement> strip_settings(const std::vector<Statement>& statements) {
  std::vector<Statement> out = statements;
  for (auto& s : out) s.settings.reset();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool TrustGraph::trusts_all(const VariableSet& from, const VariableSet& to) const {
  for (auto a : from) {
    for (auto b : to) {
      if (!trusts(a, b)) return false;
    }
  }
  return true;
}

TrustGraph trust_graph(const ProbabilityModel& pm) {
  const std::size_t n = pm.variable_count();
  TrustGraph g;
  g.adjacency.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) g.adjacency[i][i] = true;
  for (const auto& c : pm.contexts()) {
    for (auto a : c) {
      for (auto b : c) g.adjacency[a][b] = true;
    }
  }
  return g;
}

namespace {

// A search state is the latest known event together with the agents whose
// statement produced it (needed for the trust check of the next hop).
struct SearchState {
  Event node;
  VariableSet knower;
  bool operator<(const SearchState& o) const {
    return node == o.node ? knower < o.knower : node < o.node;
  }
};

// Tie-break cost of a shortest chain: first whether the conclusion denies
// the latest outcome of the start event, then how many hops infer a later
// agent's outcome from earlier ones.
using ChainCost = std::pair<int, int>;

ChainCost operator+(const ChainCost& a, const ChainCost& b) {
  return {a.first + b.first, a.second + b.second};
}

struct Candidate {
  ChainCost cost;
  std::size_t start_index = 0;
  std::vector<std::size_t> links;
};

bool forward_hop(const Statement& s) {
  auto a = s.antecedent.variables(), c = s.consequent.variables();
  return c.back() > a.back();
}

std::optional<Candidate> best_from(const Event& start, std::size_t start_index,
                                   const std::vector<Statement>& inferences,
                                   const TrustGraph& trust, std::size_t bound) {
  auto edges_of = [&](const SearchState& s) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < inferences.size(); ++i) {
      const auto& inf = inferences[i];
      if (s.node.contains(inf.antecedent) && trust.trusts_all(s.knower, inf.antecedent.variables())) {
        out.push_back(i);
      }
    }
    return out;
  };
  const std::size_t latest = start.variables().back();

  // Breadth-first layers until the first goal edge appears.
  std::map<SearchState, std::size_t> depth;
  std::vector<std::vector<SearchState>> layers{{SearchState{start, start.variables()}}};
  depth[layers[0][0]] = 0;
  std::optional<std::size_t> length;
  for (std::size_t d = 0; d < bound && !length; ++d) {
    std::vector<SearchState> next;
    for (const auto& s : layers[d]) {
      for (auto i : edges_of(s)) {
        const auto& inf = inferences[i];
        if (inf.consequent.conflicts_with(start)) {
          length = d + 1;
          continue;
        }
        SearchState t{inf.consequent, inf.antecedent.variables()};
        if (!depth.count(t)) {
          depth[t] = d + 1;
          next.push_back(t);
        }
      }
    }
    if (next.empty() && !length) break;
    layers.push_back(std::move(next));
  }
  if (!length) return std::nullopt;

  // Cheapest completion from every state lying on a shortest chain, computed
  // from the last layer back to the start.
  std::map<SearchState, std::pair<ChainCost, std::size_t>> best;
  for (std::size_t d = *length; d-- > 0;) {
    for (const auto& s : layers[d]) {
      std::optional<std::pair<ChainCost, std::size_t>> pick;
      for (auto i : edges_of(s)) {
        const auto& inf = inferences[i];
        ChainCost step{0, forward_hop(inf) ? 1 : 0};
        ChainCost total;
        if (inf.consequent.conflicts_with(start)) {
          if (d + 1 != *length) continue;
          auto denied = inf.consequent.value_of(latest);
          step.first = denied && *denied != *start.value_of(latest) ? 0 : 1;
          total = step;
        } else {
          SearchState t{inf.consequent, inf.antecedent.variables()};
          auto it = depth.find(t);
          if (it == depth.end() || it->second != d + 1) continue;
          auto b = best.find(t);
          if (b == best.end()) continue;
          total = step + b->second.first;
        }
        if (!pick || total < pick->first) pick = std::make_pair(total, i);
      }
      if (pick) best[s] = *pick;
    }
  }

  Candidate c;
  c.start_index = start_index;
  SearchState s{start, start.variables()};
  c.cost = best.at(s).first;
  for (std::size_t d = 0; d < *length; ++d) {
    std::size_t i = best.at(s).second;
    c.links.push_back(i);
    s = SearchState{inferences[i].consequent, inferences[i].antecedent.variables()};
  }
  return c;
}

std::optional<ParadoxCertificate> search(const ProbabilityModel& pm,
                                         std::optional<std::size_t> max_len,
                                         const Tolerances& tol, bool symmetric_only) {
  auto statements = strip_settings(derive_statements(pm, tol));
  std::vector<Statement> inferences, outcomes;
  for (auto& s : statements) {
    (s.kind == StatementKind::Inference ? inferences : outcomes).push_back(s);
  }
  if (symmetric_only) {
    std::set<std::pair<Event, Event>> present;
    for (const auto& s : inferences) present.emplace(s.antecedent, s.consequent);
    std::vector<Statement> two_way;
    for (const auto& s : inferences) {
      if (present.count({s.consequent, s.antecedent})) two_way.push_back(s);
    }
    inferences = std::move(two_way);
  }
  std::size_t bound = max_len.value_or(2 * pm.variable_count());
  TrustGraph trust = trust_graph(pm);

  // Shortest length first, then cost, then start event, then link sequence.
  std::optional<Candidate> best;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    auto c = best_from(outcomes[k].consequent, k, inferences, trust, bound);
    if (!c) continue;
    if (!best || c->links.size() < best->links.size() ||
        (c->links.size() == best->links.size() && c->cost < best->cost)) {
      best = std::move(c);
      bound = best->links.size();
    }
  }
  if (!best) return std::nullopt;

  const Event& start = outcomes[best->start_index].consequent;
  ParadoxCertificate cert;
  cert.chain.start = start;
  for (auto i : best->links) cert.chain.links.push_back(inferences[i]);
  cert.postselection = start;
  cert.p_postselection = outcomes[best->start_index].probability;
  const Event& end = cert.chain.links.back().consequent;
  std::vector<std::pair<std::size_t, int>> s_part, e_part;
  for (const auto& [var, val] : end.values) {
    auto sv = start.value_of(var);
    if (sv && *sv != val) {
      s_part.emplace_back(var, *sv);
      e_part.emplace_back(var, val);
    }
  }
  cert.contradicted_start = Event(s_part);
  cert.contradicted_end = Event(e_part);
  return cert;
}

}  // namespace

std::optional<ParadoxCertificate> find_paradox(const ProbabilityModel& pm,
                                               std::optional<std::size_t> max_len,
                                               const Tolerances& tol) {
  auto cert = search(pm, max_len, tol, false);
  if (cert) validate_certificate(pm, *cert, tol);
  return cert;
}

std::optional<ParadoxCertificate> find_symmetric_paradox(const ProbabilityModel& pm,
                                                         std::optional<std::size_t> max_len,
                                                         const Tolerances& tol) {
  auto cert = search(pm, max_len, tol, true);
  if (cert) validate_certificate(pm, *cert, tol);
  return cert;
}

void validate_certificate(const ProbabilityModel& pm, const ParadoxCertificate& cert,
                          const Tolerances& tol) {
  const auto& start = cert.chain.start;
  const auto& links = cert.chain.links;
  auto fail = [](const std::string& why) { throw VerificationFailure("certificate: " + why); };
  if (!(start == cert.postselection)) fail("chain does not start at the postselection event");
  if (start.negated || start.empty()) fail("start event must be a positive assignment");
  if (!pm.within_context(start.variables())) fail("start event is not jointly measurable");
  double p = pm.joint(start.variables()).probability(start);
  if (p <= tol.certainty) fail("postselection event is impossible");
  if (std::abs(p - cert.p_postselection) > tol.probability) fail("postselection probability");
  if (links.empty()) fail("empty chain");

  TrustGraph trust = trust_graph(pm);
  Event known = start;
  VariableSet knower = start.variables();
  for (const auto& l : links) {
    if (l.kind != StatementKind::Inference) fail("link is not an inference");
    if (!known.contains(l.antecedent)) fail("link antecedent does not follow from the chain");
    VariableSet vars = l.variables();
    if (!pm.within_context(vars)) fail("link spans incompatible measurements");
    if (!trust.trusts_all(knower, l.antecedent.variables())) fail("link is not trust-licensed");
    auto c = pm.joint(vars).conditional(l.consequent, l.antecedent, tol.certainty);
    if (!c || *c < 1.0 - tol.certainty) fail("link is not certain");
    if (std::abs(*c - l.probability) > tol.probability) fail("link probability");
    knower = l.antecedent.variables();
    known = l.consequent;
  }
  if (!links.back().consequent.conflicts_with(start)) fail("chain does not contradict its start");
  if (cert.contradicted_start.empty() || !start.contains(cert.contradicted_start) ||
      !links.back().consequent.contains(cert.contradicted_end) ||
      cert.contradicted_start.variables() != cert.contradicted_end.variables()) {
    fail("contradicted values are inconsistent");
  }
}

bool check_deterministic_endpoints(const ParadoxCertificate& cert, const Tolerances& tol) {
  return cert.p_postselection < 1.0 - tol.certainty;
}

Statement negate_inference(const ProbabilityModel& pm, const Statement& inference,
                           const Tolerances& tol) {
  if (inference.kind != StatementKind::Inference) {
    throw PreconditionError("negate_inference: not an inference");
  }
  auto arities = pm.arities();
  Statement out;
  out.kind = StatementKind::Inference;
  out.antecedent = negate(inference.consequent).canonical(arities);
  out.consequent = negate(inference.antecedent).canonical(arities);
  VariableSet vars = out.variables();
  if (!pm.within_context(vars)) throw PreconditionError("negate_inference: incompatible sets");
  auto c = pm.joint(vars).conditional(out.consequent, out.antecedent, tol.certainty);
  if (c && *c < 1.0 - tol.certainty) {
    throw VerificationFailure("negated inference fails: P = " + std::to_string(*c));
  }
  out.probability = c ? *c : std::nan("");
  if (inference.settings) out.settings = inference.settings;
  return out;
}

Matrix event_projector(const MultiAgentSetup& setup, const Event& e) {
  auto d = static_cast<Eigen::Index>(setup.layout().total_dim());
  Matrix p = Matrix::Identity(d, d);
  for (const auto& [var, val] : e.values) {
    if (var >= setup.agent_count()) throw SchemaError("event names an unknown agent");
    if (val < 0 || val >= setup.arity(var)) throw SchemaError("event value out of range");
    p = setup.primed(var)[static_cast<std::size_t>(val)] * p;
  }
  if (e.negated) p = Matrix::Identity(d, d) - p;
  return p;
}

namespace {

void require_commuting(const MultiAgentSetup& setup, const VariableSet& agents, double eps) {
  for (std::size_t x = 0; x < agents.size(); ++x) {
    for (std::size_t y = x + 1; y < agents.size(); ++y) {
      if (!setup.primed_commute(agents[x], agents[y], eps)) {
        throw PreconditionError("primed measurements of '" + setup.agents()[agents[x]].agent +
                                "' and '" + setup.agents()[agents[y]].agent + "' do not commute");
      }
    }
  }
}

double expect(const MultiAgentSetup& setup, const Matrix& op) {
  const auto& psi = setup.full_initial_state();
  return psi.dot(op * psi).real();
}

void require_certain(const MultiAgentSetup& setup, const Event& from, const Event& to,
                     const Tolerances& tol, const char* what) {
  auto p = predict(setup, to, from, tol);
  if (!p || *p < 1.0 - tol.certainty) {
    throw PreconditionError(std::string(what) + " is not a certain inference");
  }
}

}  // namespace

Statement reduce_triple(const MultiAgentSetup& setup, const Statement& c_to_b,
                        const Statement& b_to_a, const Tolerances& tol) {
  if (c_to_b.kind != StatementKind::Inference || b_to_a.kind != StatementKind::Inference) {
    throw PreconditionError("reduce_triple: links must be inferences");
  }
  if (!(c_to_b.consequent == b_to_a.antecedent)) {
    throw PreconditionError("reduce_triple: links do not share their middle event");
  }
  const Event& c = c_to_b.antecedent;
  const Event& a = b_to_a.consequent;
  if (c == a) throw PreconditionError("reduce_triple: end events are identical");
  require_certain(setup, c, c_to_b.consequent, tol, "first link");
  require_certain(setup, b_to_a.antecedent, a, tol, "second link");
  VariableSet agents = sorted_union(sorted_union(c.variables(), a.variables()),
                                    c_to_b.consequent.variables());
  require_commuting(setup, agents, tol.algebraic);

  Matrix pc = event_projector(setup, c);
  Matrix pa = event_projector(setup, a);
  double denom = expect(setup, pc);
  if (denom <= tol.certainty) throw PreconditionError("reduce_triple: antecedent is impossible");
  double prob = expect(setup, pa * pc) / denom;
  if (prob < 1.0 - tol.certainty) {
    throw VerificationFailure("reduced inference fails: P = " + std::to_string(prob));
  }
  auto direct = predict(setup, a, c, tol);
  if (!direct || std::abs(*direct - prob) > tol.probability) {
    throw VerificationFailure("reduced inference disagrees with the default prediction");
  }
  Statement out{StatementKind::Inference, c, a, prob, std::nullopt};
  out.settings = default_settings(setup, out.variables());
  return out;
}

SymmetricReduction reduce_symmetric_chain(const MultiAgentSetup& setup,
                                          const std::vector<Event>& chain,
                                          const Tolerances& tol) {
  if (chain.size() < 2) throw PreconditionError("symmetric chain needs at least two events");
  const std::size_t n = chain.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Event& x = chain[i];
    const Event& y = chain[(i + 1) % n];
    require_commuting(setup, sorted_union(x.variables(), y.variables()), tol.algebraic);
    if (i + 1 < n) {
      require_certain(setup, x, y, tol, "forward link");
      require_certain(setup, y, x, tol, "backward link");
    }
  }
  const Event& first = chain.front();
  const Event& last = chain.back();
  Matrix p1 = event_projector(setup, first);
  Matrix pn = event_projector(setup, last);
  double e1 = expect(setup, p1), en = expect(setup, pn);
  if (e1 <= tol.certainty || en <= tol.certainty) {
    throw PreconditionError("symmetric chain: end event is impossible");
  }
  double both = expect(setup, pn * p1);
  SymmetricReduction out;
  out.forward = {StatementKind::Inference, first, last, both / e1, std::nullopt};
  out.backward = {StatementKind::Inference, last, first, both / en, std::nullopt};
  auto d = static_cast<Eigen::Index>(setup.layout().total_dim());
  out.contradiction_mass = expect(setup, (Matrix::Identity(d, d) - pn) * p1);
  if (out.forward.probability < 1.0 - tol.certainty ||
      out.backward.probability < 1.0 - tol.certainty) {
    throw VerificationFailure("symmetric reduction fails");
  }
  return out;
}

YabloVerdict check_yablo_blocked(const MultiAgentSetup& setup,
                                 const std::vector<Statement>& statements,
                                 const Tolerances& tol) {
  const std::size_t n = setup.agent_count();
  std::set<std::pair<std::size_t, std::size_t>> edges;
  std::set<std::size_t> involved;
  for (const auto& s : statements) {
    if (s.kind != StatementKind::Inference || s.antecedent.size() != 1 || s.antecedent.negated ||
        s.consequent.negated || s.antecedent.values[0].second != 1) {
      throw PreconditionError("statement does not match the a_i = 1 => a_j = 0 pattern");
    }
    std::size_t i = s.antecedent.values[0].first;
    involved.insert(i);
    for (const auto& [j, v] : s.consequent.values) {
      if (v != 0 || j == i) throw PreconditionError("consequent must set other agents to 0");
      edges.emplace(i, j);
      involved.insert(j);
    }
  }
  if (involved.size() < 2) throw PreconditionError("pattern needs at least two agents");
  for (auto v : involved) {
    if (v >= n) throw SchemaError("statement names an unknown agent");
  }
  std::vector<std::size_t> order(involved.begin(), involved.end());
  auto outdeg = [&](std::size_t v) {
    return std::count_if(edges.begin(), edges.end(), [&](const auto& e) { return e.first == v; });
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return outdeg(a) > outdeg(b); });
  std::set<std::pair<std::size_t, std::size_t>> expected;
  for (std::size_t x = 0; x < order.size(); ++x) {
    for (std::size_t y = x + 1; y < order.size(); ++y) expected.emplace(order[x], order[y]);
  }
  if (expected != edges) throw PreconditionError("statements do not form a finite Yablo pattern");

  YabloVerdict out;
  out.order = order;
  VariableSet agents(involved.begin(), involved.end());
  out.all_compatible = compatible(setup, agents, tol);
  out.statements_hold = std::all_of(statements.begin(), statements.end(), [&](const Statement& s) {
    auto p = predict(setup, s.consequent, s.antecedent, tol);
    return p && *p >= 1.0 - tol.certainty;
  });
  auto model = model_from_setup(setup, tol);
  out.verdict = is_logically_contextual(model, SearchEngine::Backtracking, tol).verdict;
  SetupProbabilities pm(setup, tol);
  out.paradox_found = find_paradox(pm, std::nullopt, tol).has_value();
  if (out.all_compatible) out.global_distribution = joint_distribution(setup, agents);
  return out;
}

std::vector<std::vector<bool>> consistent_assignments(const std::vector<ClassicalStatement>& s) {
  const std::size_t n = s.size();
  if (n > 20) throw SchemaError("too many statements to enumerate");
  for (const auto& st : s) {
    for (auto r : st.refs) {
      if (r >= n) throw SchemaError("statement refers to an unknown statement");
    }
  }
  std::vector<std::vector<bool>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    auto truth = [&](std::size_t k) { return static_cast<bool>(mask >> k & 1u); };
    bool ok = true;
    for (std::size_t k = 0; k < n && ok; ++k) {
      bool claim = false;
      switch (s[k].kind) {
        case ClassicalStatement::Kind::Affirms: claim = truth(s[k].refs.at(0)); break;
        case ClassicalStatement::Kind::Denies: claim = !truth(s[k].refs.at(0)); break;
        case ClassicalStatement::Kind::DeniesAll:
          claim = std::none_of(s[k].refs.begin(), s[k].refs.end(), truth);
          break;
      }
      ok = claim == truth(k);
    }
    if (!ok) continue;
    std::vector<bool> a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = truth(k);
    out.push_back(std::move(a));
  }
  return out;
}

namespace {

void add_edge(ReferenceGraph& g, std::size_t from, std::size_t to) {
  auto& adj = g.adjacency[from];
  if (std::find(adj.begin(), adj.end(), to) == adj.end()) {
    adj.push_back(to);
    std::sort(adj.begin(), adj.end());
  }
}

}  // namespace

ReferenceGraph reference_graph(const ParadoxCertificate& cert,
                               const std::vector<std::string>& names,
                               const std::vector<std::vector<std::string>>& labels) {
  // Nodes are the outcome sets the statements talk about; the closing link
  // negates the start, so it refers back to the start node.
  ReferenceGraph g;
  std::map<VariableSet, std::size_t> ids;
  auto node = [&](const VariableSet& vars, const Event& shown) {
    auto it = ids.find(vars);
    if (it != ids.end()) return it->second;
    ids.emplace(vars, g.nodes.size());
    g.nodes.push_back(format_event(names, shown, labels));
    g.adjacency.emplace_back();
    return g.nodes.size() - 1;
  };
  std::size_t start = node(cert.chain.start.variables(), cert.chain.start);
  std::size_t prev = start;
  const auto& links = cert.chain.links;
  for (std::size_t i = 0; i < links.size(); ++i) {
    std::size_t next = i + 1 == links.size()
                           ? start
                           : node(links[i].consequent.variables(), links[i].consequent);
    add_edge(g, prev, next);
    prev = next;
  }
  return g;
}

ReferenceGraph reference_graph(const std::vector<Statement>& statements,
                               const ProbabilityModel& pm) {
  ReferenceGraph g;
  auto names = pm.names();
  auto labels = pm.outcome_labels();
  TrustGraph trust = trust_graph(pm);
  std::map<Event, std::size_t> ids;
  std::vector<Statement> sorted = strip_settings(statements);
  for (const auto& s : sorted) {
    if (s.kind != StatementKind::Outcome || ids.count(s.consequent)) continue;
    ids.emplace(s.consequent, g.nodes.size());
    g.nodes.push_back(format_event(names, s.consequent, labels));
    g.adjacency.emplace_back();
  }
  for (const auto& s : sorted) {
    if (s.kind != StatementKind::Inference) continue;
    auto a = ids.find(s.antecedent), c = ids.find(s.consequent);
    if (a == ids.end() || c == ids.end()) continue;
    if (!trust.trusts_all(s.antecedent.variables(), s.consequent.variables())) continue;
    add_edge(g, a->second, c->second);
  }
  return g;
}

ReferenceGraph reference_graph(const std::vector<ClassicalStatement>& statements) {
  ReferenceGraph g;
  for (std::size_t k = 0; k < statements.size(); ++k) {
    g.nodes.push_back("S" + std::to_string(k + 1));
    g.adjacency.emplace_back();
  }
  for (std::size_t k = 0; k < statements.size(); ++k) {
    for (auto r : statements[k].refs) {
      if (r >= statements.size()) throw SchemaError("statement refers to an unknown statement");
      add_edge(g, k, r);
    }
  }
  return g;
}

bool has_directed_cycle(const ReferenceGraph& g) {
  enum Color { White, Grey, Black };
  std::vector<Color> color(g.nodes.size(), White);
  for (std::size_t root = 0; root < g.nodes.size(); ++root) {
    if (color[root] != White) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    color[root] = Grey;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < g.adjacency[v].size()) {
        std::size_t w = g.adjacency[v][next++];
        if (color[w] == Grey) return true;
        if (color[w] == White) {
          color[w] = Grey;
          stack.emplace_back(w, 0);
        }
      } else {
        color[v] = Black;
        stack.pop_back();
      }
    }
  }
  return false;
}

std::string to_dot(const ReferenceGraph& g, const std::string& name) {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    std::string label = g.nodes[i];
    std::string escaped;
    for (char ch : label) {
      if (ch == '"' || ch == '\\') escaped += '\\';
      escaped += ch;
    }
    os << "  n" << i << " [label=\"" << escaped << "\"];\n";
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (auto j : g.adjacency[i]) os << "  n" << i << " -> n" << j << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string format_statement(const Statement& s, const std::vector<std::string>& names,
                             const std::vector<std::vector<std::string>>& labels) {
  if (s.kind == StatementKind::Outcome) return "possible(" + format_event(names, s.consequent, labels) + ")";
  return format_event(names, s.antecedent, labels) + " => " +
         format_event(names, s.consequent, labels);
}

}  // namespace wfp
