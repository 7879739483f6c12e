#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wfp/event.hpp"
#include "wfp/hilbert.hpp"
#include "wfp/tolerance.hpp"

namespace wfp {

struct TargetedOperator {
  std::vector<std::string> targets;
  hilbert::Operator op;  // on layout.sublayout(targets)
};

struct Measurement {
  std::string agent;
  std::string memory;
  int time = 0;
  std::vector<std::string> targets;          // subsystems the projectors act on
  std::vector<hilbert::Operator> projectors;  // indexed by outcome value
  std::optional<TargetedOperator> pre_unitary;
  std::vector<std::string> outcome_labels;   // optional display names, one per outcome
};

// s_i = 1: agent i is modelled projectively (its outcome is recorded).
// s_i = 0: agent i is modelled as a unitary on system and memory.
using SettingVector = std::vector<bool>;

struct Branch {
  std::vector<std::optional<int>> outcomes;  // one slot per agent, set when s_i = 1
  hilbert::Vector state;                     // unnormalized
  double probability = 0.0;
};

class MultiAgentSetup {
 public:
  // Agents must be listed in strictly increasing time. Every memory starts in
  // the basis state given by memory_init (default |0>); the initial state
  // covers the remaining (system) factors in layout order.
  MultiAgentSetup(hilbert::Layout layout, hilbert::StateVector initial_state,
                  std::vector<Measurement> agents,
                  std::map<std::string, std::size_t> memory_init = {}, std::string name = "",
                  const Tolerances& tol = {});

  const std::string& name() const { return name_; }
  const hilbert::Layout& layout() const { return layout_; }
  const hilbert::StateVector& initial_state() const { return initial_state_; }
  const hilbert::Vector& full_initial_state() const { return psi0_; }
  const std::map<std::string, std::size_t>& memory_init() const { return memory_init_; }
  const std::vector<Measurement>& agents() const { return agents_; }
  std::size_t agent_count() const { return agents_.size(); }
  std::size_t agent_index(const std::string& agent) const;
  int arity(std::size_t i) const { return static_cast<int>(agents_[i].projectors.size()); }
  std::vector<int> arities() const;
  std::vector<std::string> agent_names() const;
  // Accepts an outcome label or a decimal outcome index.
  int outcome_value(std::size_t agent, const std::string& label) const;
  std::string outcome_label(std::size_t agent, int value) const;

  // Full-layout operators, precomputed at construction.
  const hilbert::Matrix& pre_unitary(std::size_t i) const { return pre_[i]; }
  const hilbert::Matrix& memory_update(std::size_t i) const { return update_[i]; }
  const hilbert::Matrix& evolution(std::size_t i) const { return evolution_[i]; }
  const hilbert::Matrix& record_projector(std::size_t i, int k) const {
    return record_[i][static_cast<std::size_t>(k)];
  }
  // Outcome projectors of agent i pulled back to the initial state through
  // everything that happened before it.
  const std::vector<hilbert::Matrix>& primed(std::size_t i) const { return primed_[i]; }
  // Whether the primed families of agents a and b commute; memoized per eps.
  bool primed_commute(std::size_t a, std::size_t b, double eps) const;

 private:
  std::string name_;
  hilbert::Layout layout_;
  hilbert::StateVector initial_state_;
  std::vector<Measurement> agents_;
  std::map<std::string, std::size_t> memory_init_;
  hilbert::Vector psi0_;
  std::vector<hilbert::Matrix> pre_, update_, evolution_;
  std::vector<std::vector<hilbert::Matrix>> record_, primed_;
  mutable std::vector<std::vector<signed char>> commute_cache_;  // -1 unknown
  mutable double commute_eps_ = -1.0;
};

SettingVector default_settings(const MultiAgentSetup& setup, const VariableSet& mentioned);

std::vector<Branch> simulate(const MultiAgentSetup& setup, const SettingVector& settings);

// P(target | condition) with s_i = 1 exactly for mentioned agents; nullopt
// when P(condition) <= eps.
std::optional<double> predict(const MultiAgentSetup& setup, const Event& target,
                              const Event& condition, const Tolerances& tol = {});
std::optional<double> predict_with_settings(const MultiAgentSetup& setup, const Event& target,
                                            const Event& condition, const SettingVector& settings,
                                            const Tolerances& tol = {});

// Joint outcome distribution of `vars` under their default settings.
JointTable joint_distribution(const MultiAgentSetup& setup, const VariableSet& vars);
// Same distribution evaluated from the primed projectors on the initial state.
JointTable primed_distribution(const MultiAgentSetup& setup, const VariableSet& vars);

// Primed projector families, one per agent of `subset`, on the full layout.
std::vector<std::vector<hilbert::Operator>> effective_projectors(const MultiAgentSetup& setup,
                                                                 const VariableSet& subset);

bool compatible(const MultiAgentSetup& setup, const VariableSet& subset,
                const Tolerances& tol = {});

// Maximal compatible subsets, sorted lexicographically.
std::vector<VariableSet> contexts(const MultiAgentSetup& setup, const Tolerances& tol = {});

// Parses "u=ok,w=1" into an event using agent names and outcome labels.
Event parse_event(const MultiAgentSetup& setup, const std::string& text);
std::string format_event(const std::vector<std::string>& names, const Event& e,
                         const std::vector<std::vector<std::string>>& labels = {});

}  // namespace wfp
