#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wfp/tolerance.hpp"

namespace wfp {

class EmpiricalModel;

// Binary variables X_0 .. X_{n-1} with contexts {X_i, X_{i+1 mod n}}. Edge i
// holds P(x_i, x_{i+1}) indexed [2 x_i + x_{i+1}].
class NCycleModel {
 public:
  NCycleModel() = default;
  NCycleModel(std::size_t n, std::vector<std::array<double, 4>> edges,
              std::vector<std::string> names = {}, const Tolerances& tol = {});

  std::size_t n() const { return edges_.size(); }
  const std::array<double, 4>& edge(std::size_t i) const { return edges_.at(i); }
  const std::vector<std::array<double, 4>>& edges() const { return edges_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::array<double, 4>> edges_;
  std::vector<std::string> names_;
};

// Entries are +1 or -1 with an odd number of -1.
using GammaVector = std::vector<int>;

void validate_gamma(const GammaVector& gamma, std::size_t n);

// <X_i X_{i+1}> = P(equal) - P(differ)
double expectation(const NCycleModel& model, std::size_t i);
double omega(const NCycleModel& model, const GammaVector& gamma);

struct OmegaMax {
  double value = 0.0;
  GammaVector gamma;
};
// Best Omega over all admissible gamma; ties resolve to the gamma with its
// -1 entries as late as possible.
OmegaMax max_omega(const NCycleModel& model);

// The gamma vector when every correlation is +-1 with an odd number of -1.
std::optional<GammaVector> is_extremal_vertex(const NCycleModel& model, const Tolerances& tol = {});

NCycleModel extremal_model(std::size_t n, const GammaVector& gamma);

// x_start = v => x_{start+1} = .. => x_start = 1 - v, a chain of n certain
// implications around the cycle.
struct BinaryChain {
  std::vector<std::pair<std::size_t, int>> nodes;  // n + 1 entries
  std::vector<double> probabilities;               // n conditionals, each 1
};

std::optional<std::pair<BinaryChain, BinaryChain>> find_ps_free_paradox(
    const NCycleModel& model, const Tolerances& tol = {});

// Recognizes models whose contexts are the edges of a single cycle over
// binary variables; the cycle starts at variable 0 and walks to the smaller
// unvisited neighbour first.
std::optional<NCycleModel> ncycle_from_model(const EmpiricalModel& model,
                                             const Tolerances& tol = {});
EmpiricalModel to_empirical_model(const NCycleModel& model);

}  // namespace wfp
