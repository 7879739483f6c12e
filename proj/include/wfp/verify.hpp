#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wfp/contextuality.hpp"
#include "wfp/hilbert.hpp"
#include "wfp/tolerance.hpp"
#include "wfp/wigner_setup.hpp"

namespace wfp {

// Random instances for the property suites. All draws come from the given
// engine, so a fixed seed fixes the instance sequence.
namespace gen {

using Rng = std::mt19937_64;

hilbert::Matrix haar_unitary(Rng& rng, std::size_t dim);

// 1..max_qubits system qubits, 2..max_agents binary agents. The state has
// random zeros in a random local frame; measurements use the computational
// basis, the state's frame or a random basis; some agents first undo an
// earlier agent's record.
MultiAgentSetup random_setup(Rng& rng, std::size_t max_agents = 4, std::size_t max_qubits = 3);

// a|00> + b|10> + c|11> on R,S with the two-lab measurement structure of the
// four-agent paradox; u and w use "ok" vectors orthogonal to the relevant
// branches, so the chain u=ok => b=1 => a=1 => w=fail always exists.
MultiAgentSetup hardy_setup(Rng& rng);

// n agents whose measurements share one eigenbasis of the system and whose
// outcome of basis index k is given by `labels[agent][k]`. Each agent i > 0
// first undoes agent i-1's record, so every primed family acts on the system
// alone. `amplitudes` is expressed in the shared eigenbasis.
MultiAgentSetup commuting_setup(Rng& rng, std::size_t qubits,
                                const std::vector<std::vector<int>>& labels,
                                const std::vector<hilbert::Complex>& amplitudes);

// n agents on n qubits measuring "qubit is 1" in a common random frame, with
// the state supported on strings holding at most one 1.
MultiAgentSetup yablo_setup(Rng& rng, std::size_t n, std::vector<std::size_t>* order = nullptr);

// Up to max_vars binary variables, random covering contexts, tables with
// zeros. Some models are projections of a global distribution.
EmpiricalModel random_model(Rng& rng, std::size_t max_vars = 6);

}  // namespace gen

struct SuiteResult {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::size_t checks = 0;
  std::vector<std::string> notes;     // counters worth reporting
  std::vector<std::string> failures;  // counterexample dumps
  bool passed() const { return failures.empty() && cases > 0; }
};

std::vector<std::string> suite_names();

// `cases` is clamped from below to each suite's minimum (200, 500 for oracle).
// Throws SchemaError for an unknown suite.
SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t cases = 0,
                      const Tolerances& tol = {});

}  // namespace wfp
