#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wfp/contextuality.hpp"
#include "wfp/ncycle.hpp"
#include "wfp/reasoning.hpp"
#include "wfp/wigner_setup.hpp"

namespace wfp::presets {

// Two labs sharing (|00> + |10> + |11>)/sqrt(3) on R,S. Agents a, b measure
// Z on R and S; u and w measure their neighbouring lab in the basis
// ok = (|00> - |11>)/sqrt(2) (outcome 1, label "ok") against its complement
// (outcome 0, label "fail"). Layout R,S,A,B,U,W.
MultiAgentSetup fr_setup();

// Qutrit S in (|0> + |1> + |2>)/sqrt(3) with five agents a1..a5 measuring
// the KCBS vectors. Time order a2, a3, a4, a5, a1; a4, a5 and a1 first undo
// the record made two steps earlier. Layout S,M2,M3,M4,M5,M1.
MultiAgentSetup kcbs_setup();

// KCBS projection vectors v1..v5 (index 0 is v1).
std::vector<hilbert::Vector> kcbs_vectors();

enum class UrsulaBasis { Computational, Bell };

// (a) alice Z on R, bob Z on S, charlie X on R, debbie Z on R.
// (b) alice Z on R, bob Z on S, ursula on (R, A) in the chosen basis.
std::pair<MultiAgentSetup, MultiAgentSetup> compat_demo_setups(
    UrsulaBasis basis = UrsulaBasis::Computational);

NCycleModel pr_box_ncycle();
EmpiricalModel pr_box_model();

// S_k: "S_{k+1} is true" for k < N, S_N: "S_1 is false".
std::vector<ClassicalStatement> liar_chain(std::size_t n);
// S_k: "every S_j with j > k is false".
std::vector<ClassicalStatement> yablo_prefix(std::size_t n);

}  // namespace wfp::presets
