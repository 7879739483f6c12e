#pragma once

namespace wfp {

struct Tolerances {
  double algebraic = 1e-9;    // unitarity, projector, commutator checks
  double norm = 1e-9;         // state normalization
  double probability = 1e-9;  // comparison of two probabilities
  double certainty = 1e-9;    // P > eps is "possible", P >= 1 - eps is "certain"

  static Tolerances uniform(double eps) { return {eps, eps, eps, eps}; }
};

}  // namespace wfp
