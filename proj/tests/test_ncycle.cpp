#include <gtest/gtest.h>

#include <cmath>

#include "wfp/contextuality.hpp"
#include "wfp/errors.hpp"
#include "wfp/ncycle.hpp"
#include "wfp/presets.hpp"

using namespace wfp;

TEST(Gamma, Validation) {
  EXPECT_NO_THROW(validate_gamma({1, 1, -1}, 3));
  EXPECT_ANY_THROW(validate_gamma({1, 1, 1}, 3));
  EXPECT_ANY_THROW(validate_gamma({1, -1}, 3));
  EXPECT_ANY_THROW(validate_gamma({1, 0, -1}, 3));
}

TEST(PrBox, ExtremalVertex) {
  auto pr = presets::pr_box_ncycle();
  auto g = is_extremal_vertex(pr);
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(*g, (GammaVector{1, 1, 1, -1}));
  EXPECT_NEAR(omega(pr, *g), 4.0, 1e-12);
  auto best = max_omega(pr);
  EXPECT_NEAR(best.value, 4.0, 1e-12);
  EXPECT_EQ(best.gamma, *g);
}

TEST(PrBox, PostselectionFreeChains) {
  auto pr = presets::pr_box_ncycle();
  auto chains = find_ps_free_paradox(pr);
  ASSERT_TRUE(chains.has_value());
  for (const auto* c : {&chains->first, &chains->second}) {
    ASSERT_EQ(c->nodes.size(), 5u);
    EXPECT_EQ(c->nodes.front().first, c->nodes.back().first);
    EXPECT_EQ(c->nodes.front().second, 1 - c->nodes.back().second);
    for (std::size_t i = 0; i < 4; ++i) {
      // Recheck each implication from the edge table.
      auto [x, vx] = c->nodes[i];
      auto [y, vy] = c->nodes[i + 1];
      EXPECT_EQ(y, (x + 1) % 4);
      const auto& e = pr.edge(x);
      double joint = e[static_cast<std::size_t>(2 * vx + vy)];
      double marg = e[static_cast<std::size_t>(2 * vx)] + e[static_cast<std::size_t>(2 * vx + 1)];
      EXPECT_NEAR(joint / marg, 1.0, 1e-12);
      EXPECT_NEAR(c->probabilities[i], 1.0, 1e-12);
    }
  }
  EXPECT_NE(chains->first.nodes.front().second, chains->second.nodes.front().second);
}

TEST(ExtremalModel, EveryAdmissibleGamma) {
  for (std::size_t n = 3; n <= 6; ++n) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) % 2 == 0) continue;
      GammaVector g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = ((mask >> i) & 1u) ? -1 : 1;
      auto m = extremal_model(n, g);
      EXPECT_EQ(is_extremal_vertex(m), g);
      EXPECT_NEAR(omega(m, g), static_cast<double>(n), 1e-12);
      EXPECT_TRUE(find_ps_free_paradox(m).has_value());
      EXPECT_EQ(cross_checked_report(to_empirical_model(m)).verdict, Verdict::StronglyContextual);
    }
  }
}

TEST(QuantumCycles, BelowTheVertex) {
  auto fr = ncycle_from_model(model_from_setup(presets::fr_setup()));
  ASSERT_TRUE(fr.has_value());
  EXPECT_EQ(fr->n(), 4u);
  EXPECT_LT(max_omega(*fr).value, 4.0);
  EXPECT_FALSE(is_extremal_vertex(*fr).has_value());
  EXPECT_FALSE(find_ps_free_paradox(*fr).has_value());

  auto k = ncycle_from_model(model_from_setup(presets::kcbs_setup()));
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(k->n(), 5u);
  EXPECT_LT(max_omega(*k).value, 5.0);
  EXPECT_FALSE(find_ps_free_paradox(*k).has_value());
}

TEST(Omega, HandComputed) {
  // Uniform noise: every correlation 0.
  NCycleModel flat(3, {{0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25},
                       {0.25, 0.25, 0.25, 0.25}});
  EXPECT_NEAR(max_omega(flat).value, 0.0, 1e-12);
  // Perfect correlation everywhere: gamma with one -1 gives n - 2.
  NCycleModel eq(3, {{0.5, 0, 0, 0.5}, {0.5, 0, 0, 0.5}, {0.5, 0, 0, 0.5}});
  auto best = max_omega(eq);
  EXPECT_NEAR(best.value, 1.0, 1e-12);
  EXPECT_EQ(best.gamma, (GammaVector{1, 1, -1}));
  EXPECT_NEAR(expectation(eq, 0), 1.0, 1e-12);
}

TEST(NCycleModel, RejectsBadInput) {
  EXPECT_ANY_THROW(NCycleModel(2, {{1, 0, 0, 0}, {1, 0, 0, 0}}));
  EXPECT_ANY_THROW(NCycleModel(3, {{1, 0, 0, 0}, {1, 0, 0, 0}}));
  EXPECT_ANY_THROW(NCycleModel(3, {{0.5, 0, 0, 0.4}, {1, 0, 0, 0}, {1, 0, 0, 0}}));
}

TEST(NCycleModel, RoundTripThroughEmpiricalModel) {
  auto pr = presets::pr_box_ncycle();
  auto back = ncycle_from_model(to_empirical_model(pr));
  ASSERT_TRUE(back.has_value());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(back->edge(i), pr.edge(i));
  // A triangle-plus-chord scenario is not a cycle.
  MeasurementScenario sc{{"a", "b", "c"}, {2, 2, 2}, {{0, 1, 2}}, ""};
  EmpiricalModel m(sc, {std::vector<double>(8, 0.125)});
  EXPECT_FALSE(ncycle_from_model(m).has_value());
}
