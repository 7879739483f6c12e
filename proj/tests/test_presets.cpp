#include <gtest/gtest.h>

#include <complex>

#include "wfp/errors.hpp"
#include "wfp/presets.hpp"

using namespace wfp;

TEST(Presets, FrStructure) {
  auto fr = presets::fr_setup();
  EXPECT_EQ(fr.agent_names(), (std::vector<std::string>{"a", "b", "u", "w"}));
  EXPECT_EQ(fr.layout().total_dim(), 64u);
  EXPECT_EQ(fr.outcome_label(2, 1), "ok");
  EXPECT_EQ(fr.outcome_label(3, 0), "fail");
  EXPECT_EQ(fr.arities(), (std::vector<int>{2, 2, 2, 2}));
}

TEST(Presets, KcbsVectorsAreCyclicallyOrthogonal) {
  auto v = presets::kcbs_vectors();
  ASSERT_EQ(v.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(std::abs(v[i].dot(v[(i + 1) % 5])), 0.0, 1e-12);
    EXPECT_GT(std::abs(v[i].dot(v[(i + 2) % 5])), 1e-3);
  }
}

TEST(Presets, KcbsOrder) {
  auto k = presets::kcbs_setup();
  EXPECT_EQ(k.agent_names(), (std::vector<std::string>{"a2", "a3", "a4", "a5", "a1"}));
  // Adjacent exclusivity pairs are the contexts.
  EXPECT_EQ(contexts(k), (std::vector<VariableSet>{{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}}));
}

TEST(Presets, CompatDemoNames) {
  auto [a, b] = presets::compat_demo_setups(presets::UrsulaBasis::Bell);
  EXPECT_EQ(a.agent_names(), (std::vector<std::string>{"alice", "bob", "charlie", "debbie"}));
  EXPECT_EQ(b.agent_names(), (std::vector<std::string>{"alice", "bob", "ursula"}));
  EXPECT_EQ(b.name(), "compat-b-bell");
}

TEST(Presets, PrBox) {
  auto m = presets::pr_box_model();
  EXPECT_EQ(m.variable_count(), 4u);
  EXPECT_EQ(m.scenario().contexts.size(), 4u);
  EXPECT_TRUE(m.warnings().empty());
}

TEST(Presets, ClassicalChains) {
  EXPECT_EQ(presets::liar_chain(3).size(), 3u);
  EXPECT_THROW(presets::liar_chain(0), SchemaError);
  auto y = presets::yablo_prefix(3);
  EXPECT_EQ(y[0].refs, (std::vector<std::size_t>{1, 2}));
  EXPECT_TRUE(y[2].refs.empty());
}
