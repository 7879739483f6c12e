#include "wfp/event.hpp"

#include <algorithm>

#include "wfp/errors.hpp"

namespace wfp {

Event::Event(std::vector<std::pair<std::size_t, int>> vals, bool neg)
    : values(std::move(vals)), negated(neg) {
  std::sort(values.begin(), values.end());
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i].first == values[i - 1].first) {
      throw SchemaError("event assigns variable " + std::to_string(values[i].first) + " twice");
    }
  }
}

VariableSet Event::variables() const {
  VariableSet v;
  v.reserve(values.size());
  for (const auto& [var, _] : values) v.push_back(var);
  return v;
}

std::optional<int> Event::value_of(std::size_t var) const {
  for (const auto& [v, val] : values) {
    if (v == var) return val;
  }
  return std::nullopt;
}

bool Event::contains(const Event& sub) const {
  for (const auto& [var, val] : sub.values) {
    auto mine = value_of(var);
    if (!mine || *mine != val) return false;
  }
  return true;
}

bool Event::conflicts_with(const Event& other) const {
  for (const auto& [var, val] : other.values) {
    auto mine = value_of(var);
    if (mine && *mine != val) return true;
  }
  return false;
}

Event Event::restricted_to(const VariableSet& vars) const {
  Event out;
  out.negated = negated;
  for (const auto& p : values) {
    if (std::find(vars.begin(), vars.end(), p.first) != vars.end()) out.values.push_back(p);
  }
  return out;
}

Event Event::canonical(const std::vector<int>& arities) const {
  Event out = *this;
  if (out.negated && out.values.size() == 1 && arities.at(out.values[0].first) == 2) {
    out.values[0].second = 1 - out.values[0].second;
    out.negated = false;
  }
  return out;
}

bool Event::operator<(const Event& o) const {
  auto a = variables();
  auto b = o.variables();
  if (a != b) return a < b;
  if (values != o.values) return values < o.values;
  return negated < o.negated;
}

Event negate(const Event& e) {
  Event out = e;
  out.negated = !e.negated;
  return out;
}

Event merge(const Event& a, const Event& b) {
  if (a.negated || b.negated) throw PreconditionError("merge: negated event");
  if (a.conflicts_with(b)) throw PreconditionError("merge: conflicting events");
  std::vector<std::pair<std::size_t, int>> vals = a.values;
  for (const auto& p : b.values) {
    if (!a.value_of(p.first)) vals.push_back(p);
  }
  return Event(std::move(vals));
}

std::size_t table_size(const std::vector<int>& arities) {
  std::size_t n = 1;
  for (int a : arities) n *= static_cast<std::size_t>(a);
  return n;
}

std::vector<int> JointTable::outcome(std::size_t entry) const {
  std::vector<int> out(arities.size());
  for (std::size_t i = arities.size(); i-- > 0;) {
    out[i] = static_cast<int>(entry % static_cast<std::size_t>(arities[i]));
    entry /= static_cast<std::size_t>(arities[i]);
  }
  return out;
}

std::size_t JointTable::entry_index(const std::vector<int>& outcome) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < arities.size(); ++i) {
    idx = idx * static_cast<std::size_t>(arities[i]) + static_cast<std::size_t>(outcome[i]);
  }
  return idx;
}

namespace {

std::vector<std::size_t> positions_in(const VariableSet& table_vars, const Event& e) {
  std::vector<std::size_t> pos;
  for (const auto& [var, _] : e.values) {
    auto it = std::find(table_vars.begin(), table_vars.end(), var);
    if (it == table_vars.end()) {
      throw PreconditionError("event mentions variable " + std::to_string(var) +
                              " outside the table");
    }
    pos.push_back(static_cast<std::size_t>(it - table_vars.begin()));
  }
  return pos;
}

}  // namespace

double JointTable::probability(const Event& e) const {
  auto pos = positions_in(variables, e);
  double p = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    auto o = outcome(k);
    bool hit = true;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (o[pos[i]] != e.values[i].second) {
        hit = false;
        break;
      }
    }
    if (hit != e.negated) p += probs[k];
  }
  return p;
}

std::optional<double> JointTable::conditional(const Event& target, const Event& condition,
                                              double eps) const {
  double pc = probability(condition);
  if (pc <= eps) return std::nullopt;
  auto tpos = positions_in(variables, target);
  auto cpos = positions_in(variables, condition);
  auto holds = [](const std::vector<int>& o, const std::vector<std::size_t>& pos,
                  const Event& e) {
    bool hit = true;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (o[pos[i]] != e.values[i].second) {
        hit = false;
        break;
      }
    }
    return hit != e.negated;
  };
  double pj = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    auto o = outcome(k);
    if (holds(o, tpos, target) && holds(o, cpos, condition)) pj += probs[k];
  }
  return pj / pc;
}

JointTable JointTable::marginal(const VariableSet& vars) const {
  JointTable out;
  out.variables = vars;
  std::vector<std::size_t> pos;
  for (auto v : vars) {
    auto it = std::find(variables.begin(), variables.end(), v);
    if (it == variables.end()) throw PreconditionError("marginal: variable outside table");
    pos.push_back(static_cast<std::size_t>(it - variables.begin()));
    out.arities.push_back(arities[pos.back()]);
  }
  out.probs.assign(table_size(out.arities), 0.0);
  std::vector<int> sub(vars.size());
  for (std::size_t k = 0; k < probs.size(); ++k) {
    auto o = outcome(k);
    for (std::size_t i = 0; i < pos.size(); ++i) sub[i] = o[pos[i]];
    out.probs[out.entry_index(sub)] += probs[k];
  }
  return out;
}

}  // namespace wfp
