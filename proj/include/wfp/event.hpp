#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wfp {

// Variables are identified by their position in the owning setup or model.
// Position order doubles as the lexicographic "agent order".
using VariableSet = std::vector<std::size_t>;

// Either "a_J = v_J" or, with `negated`, "a_J != v_J".
struct Event {
  std::vector<std::pair<std::size_t, int>> values;  // sorted by variable, unique
  bool negated = false;

  Event() = default;
  Event(std::vector<std::pair<std::size_t, int>> vals, bool neg = false);

  VariableSet variables() const;
  std::optional<int> value_of(std::size_t var) const;
  bool empty() const { return values.empty(); }
  std::size_t size() const { return values.size(); }

  // Positive events only: every assignment of `sub` also appears here.
  bool contains(const Event& sub) const;
  // Some shared variable carries different values (both positive).
  bool conflicts_with(const Event& other) const;
  Event restricted_to(const VariableSet& vars) const;

  // Double negation cancels; "a != v" on a single binary variable becomes "a = 1-v".
  Event canonical(const std::vector<int>& arities) const;

  bool operator==(const Event& o) const { return values == o.values && negated == o.negated; }
  bool operator<(const Event& o) const;
};

Event negate(const Event& e);
Event merge(const Event& a, const Event& b);  // union of two consistent positive events

// Probability table over an ordered variable list. Row-major: the first
// variable is the most significant digit.
struct JointTable {
  VariableSet variables;
  std::vector<int> arities;
  std::vector<double> probs;

  std::size_t entry_count() const { return probs.size(); }
  std::vector<int> outcome(std::size_t entry) const;
  std::size_t entry_index(const std::vector<int>& outcome) const;

  double probability(const Event& e) const;
  std::optional<double> conditional(const Event& target, const Event& condition, double eps) const;
  JointTable marginal(const VariableSet& vars) const;
};

std::size_t table_size(const std::vector<int>& arities);

}  // namespace wfp
