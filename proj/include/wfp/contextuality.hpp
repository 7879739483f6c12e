#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wfp/event.hpp"
#include "wfp/tolerance.hpp"

namespace wfp {

class MultiAgentSetup;

struct MeasurementScenario {
  std::vector<std::string> variables;
  std::vector<int> arities;
  std::vector<VariableSet> contexts;  // each sorted ascending
  std::string state_ref;
};

// One probability table per context, over the context's variables in order.
class EmpiricalModel {
 public:
  EmpiricalModel() = default;
  // Throws InvariantViolation on negative entries or rows not summing to 1.
  // Overlapping marginals that disagree are recorded as warnings.
  EmpiricalModel(MeasurementScenario scenario, std::vector<std::vector<double>> tables,
                 const Tolerances& tol = {});

  const MeasurementScenario& scenario() const { return scenario_; }
  const std::vector<JointTable>& tables() const { return tables_; }
  const JointTable& table(std::size_t context) const { return tables_.at(context); }
  std::size_t variable_count() const { return scenario_.variables.size(); }
  const std::vector<std::string>& warnings() const { return warnings_; }
  std::size_t variable_index(const std::string& name) const;

 private:
  MeasurementScenario scenario_;
  std::vector<JointTable> tables_;
  std::vector<std::string> warnings_;
};

// An assignment to the variables of one context.
struct Section {
  VariableSet domain;
  std::vector<int> values;

  Event as_event() const;
  bool operator==(const Section& o) const { return domain == o.domain && values == o.values; }
  bool operator<(const Section& o) const {
    return domain != o.domain ? domain < o.domain : values < o.values;
  }
};

// Sections of context `c` whose restriction to every overlap is possible in
// the overlapping context. Empty means the model is degenerate.
std::vector<Section> possible_sections(const EmpiricalModel& model, std::size_t c,
                                       const Tolerances& tol = {});

enum class SearchEngine { Backtracking, Exhaustive };

// Lexicographically smallest global assignment whose restriction to every
// context is a possible section and which agrees with `s`.
std::optional<std::vector<int>> has_global_section_extending(
    const EmpiricalModel& model, const Section& s, SearchEngine engine = SearchEngine::Backtracking,
    const Tolerances& tol = {});

enum class Verdict { NoncontextualLogically, LogicallyContextual, StronglyContextual };
std::string to_string(Verdict v);

struct ContextualityReport {
  Verdict verdict = Verdict::NoncontextualLogically;
  std::vector<Section> failing_sections;       // sorted; first one is the witness
  std::optional<std::vector<int>> global_section;  // smallest one, when any exists
  std::size_t section_count = 0;
};

ContextualityReport is_logically_contextual(const EmpiricalModel& model,
                                            SearchEngine engine = SearchEngine::Backtracking,
                                            const Tolerances& tol = {});

// Runs both engines; throws EngineDisagreement on any difference.
ContextualityReport cross_checked_report(const EmpiricalModel& model, const Tolerances& tol = {});

EmpiricalModel model_from_setup(const MultiAgentSetup& setup, const Tolerances& tol = {});

}  // namespace wfp
