#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wfp/contextuality.hpp"
#include "wfp/event.hpp"
#include "wfp/tolerance.hpp"
#include "wfp/wigner_setup.hpp"

namespace wfp {

// Outcome statistics available to reasoning agents: a list of variables, the
// jointly observable sets, and the distribution of any subset of a context.
class ProbabilityModel {
 public:
  virtual ~ProbabilityModel() = default;
  virtual std::size_t variable_count() const = 0;
  virtual std::vector<std::string> names() const = 0;
  virtual std::vector<int> arities() const = 0;
  virtual const std::vector<VariableSet>& contexts() const = 0;
  virtual JointTable joint(const VariableSet& vars) const = 0;
  virtual std::vector<std::vector<std::string>> outcome_labels() const { return {}; }

  bool within_context(const VariableSet& vars) const;
};

// Default-setting predictions of a setup. Tables for every subset of every
// context are computed up front.
class SetupProbabilities final : public ProbabilityModel {
 public:
  explicit SetupProbabilities(const MultiAgentSetup& setup, const Tolerances& tol = {});

  std::size_t variable_count() const override { return setup_.agent_count(); }
  std::vector<std::string> names() const override { return setup_.agent_names(); }
  std::vector<int> arities() const override { return setup_.arities(); }
  const std::vector<VariableSet>& contexts() const override { return contexts_; }
  JointTable joint(const VariableSet& vars) const override;
  std::vector<std::vector<std::string>> outcome_labels() const override;

  const MultiAgentSetup& setup() const { return setup_; }

 private:
  const MultiAgentSetup& setup_;
  std::vector<VariableSet> contexts_;
  std::map<VariableSet, JointTable> tables_;
};

class ModelProbabilities final : public ProbabilityModel {
 public:
  explicit ModelProbabilities(const EmpiricalModel& model) : model_(model) {}

  std::size_t variable_count() const override { return model_.variable_count(); }
  std::vector<std::string> names() const override { return model_.scenario().variables; }
  std::vector<int> arities() const override { return model_.scenario().arities; }
  const std::vector<VariableSet>& contexts() const override { return model_.scenario().contexts; }
  JointTable joint(const VariableSet& vars) const override;

 private:
  const EmpiricalModel& model_;
};

enum class StatementKind { Outcome, Inference };

struct Statement {
  StatementKind kind = StatementKind::Outcome;
  Event antecedent;  // empty for outcome statements
  Event consequent;
  // P(consequent) for outcomes, P(consequent | antecedent) for inferences.
  // NaN for an inference whose antecedent has probability zero.
  double probability = 0.0;
  std::optional<SettingVector> settings;

  VariableSet variables() const;
  // Identity ignores probability and settings.
  bool operator==(const Statement& o) const {
    return kind == o.kind && antecedent == o.antecedent && consequent == o.consequent;
  }
  bool operator<(const Statement& o) const;
};

// Every possible outcome (P > eps) and every certain inference
// (P >= 1 - eps, antecedent possible) over subsets of a single context.
std::vector<Statement> derive_statements(const ProbabilityModel& pm, const Tolerances& tol = {});
std::vector<Statement> strip_settings(const std::vector<Statement>& statements);

// i trusts j when their measurements share a context.
struct TrustGraph {
  std::vector<std::vector<bool>> adjacency;
  bool trusts(std::size_t i, std::size_t j) const { return adjacency.at(i).at(j); }
  bool trusts_all(const VariableSet& from, const VariableSet& to) const;
};
TrustGraph trust_graph(const ProbabilityModel& pm);

struct InferenceChain {
  Event start;
  std::vector<Statement> links;
};

struct ParadoxCertificate {
  InferenceChain chain;
  Event postselection;
  double p_postselection = 0.0;
  Event contradicted_start;  // part of the postselection the chain denies
  Event contradicted_end;   // the conflicting values the chain arrives at
};

// Shortest trust-licensed chain of certain inferences that starts from a
// possible event and ends denying one of its values. Ties go to the smaller
// start event, then the lexicographically smaller link sequence. The default
// length bound is twice the number of variables.
std::optional<ParadoxCertificate> find_paradox(const ProbabilityModel& pm,
                                               std::optional<std::size_t> max_len = std::nullopt,
                                               const Tolerances& tol = {});
// Same search restricted to links whose converse is also certain.
std::optional<ParadoxCertificate> find_symmetric_paradox(
    const ProbabilityModel& pm, std::optional<std::size_t> max_len = std::nullopt,
    const Tolerances& tol = {});

// Re-derives every number in the certificate; throws VerificationFailure.
void validate_certificate(const ProbabilityModel& pm, const ParadoxCertificate& cert,
                          const Tolerances& tol = {});
bool check_deterministic_endpoints(const ParadoxCertificate& cert, const Tolerances& tol = {});

// (a = va => b = vb) becomes (b != vb => a != va), checked against the data.
Statement negate_inference(const ProbabilityModel& pm, const Statement& inference,
                           const Tolerances& tol = {});

// Given c => b and b => a with pairwise commuting primed families, returns
// c => a with its probability recomputed from the primed projectors.
Statement reduce_triple(const MultiAgentSetup& setup, const Statement& c_to_b,
                        const Statement& b_to_a, const Tolerances& tol = {});

struct SymmetricReduction {
  Statement forward;             // e_1 => e_N
  Statement backward;            // e_N => e_1
  double contradiction_mass = 0.0;  // P(e_1 and not e_N)
};
// Chain e_1 <=> e_2 <=> .. <=> e_N where neighbours (and e_N, e_1) commute.
SymmetricReduction reduce_symmetric_chain(const MultiAgentSetup& setup,
                                          const std::vector<Event>& chain,
                                          const Tolerances& tol = {});

// Projector of an event built from primed projector families.
hilbert::Matrix event_projector(const MultiAgentSetup& setup, const Event& e);

struct YabloVerdict {
  std::vector<std::size_t> order;  // agents from first to last in the pattern
  bool all_compatible = false;
  bool statements_hold = false;
  Verdict verdict = Verdict::NoncontextualLogically;
  bool paradox_found = false;
  std::optional<JointTable> global_distribution;
  bool blocked() const {
    return all_compatible && verdict == Verdict::NoncontextualLogically && !paradox_found &&
           global_distribution.has_value();
  }
};
// Statements must read a_i = 1 => a_j = 0 for all i before j in some order.
YabloVerdict check_yablo_blocked(const MultiAgentSetup& setup,
                                 const std::vector<Statement>& statements,
                                 const Tolerances& tol = {});

// Self-referential sentences over Boolean truth values: statement k asserts
// that its own truth value equals the given function of the referenced ones.
struct ClassicalStatement {
  enum class Kind { Affirms, Denies, DeniesAll };
  Kind kind = Kind::Affirms;
  std::vector<std::size_t> refs;
};
std::vector<std::vector<bool>> consistent_assignments(const std::vector<ClassicalStatement>& s);

struct ReferenceGraph {
  std::vector<std::string> nodes;
  std::vector<std::vector<std::size_t>> adjacency;  // sorted, unique
};

ReferenceGraph reference_graph(const ParadoxCertificate& cert, const std::vector<std::string>& names,
                               const std::vector<std::vector<std::string>>& labels = {});
ReferenceGraph reference_graph(const std::vector<Statement>& statements, const ProbabilityModel& pm);
ReferenceGraph reference_graph(const std::vector<ClassicalStatement>& statements);
bool has_directed_cycle(const ReferenceGraph& g);
std::string to_dot(const ReferenceGraph& g, const std::string& name = "references");

std::string format_statement(const Statement& s, const std::vector<std::string>& names,
                             const std::vector<std::vector<std::string>>& labels = {});

}  // namespace wfp
