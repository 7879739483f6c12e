#include <gtest/gtest.h>

#include "wfp/contextuality.hpp"
#include "wfp/errors.hpp"
#include "wfp/presets.hpp"
#include "wfp/verify.hpp"

using namespace wfp;

namespace {

// Two binary variables in one context plus a third sharing a context with each.
EmpiricalModel triangle(std::vector<std::vector<double>> tables) {
  MeasurementScenario sc{{"x", "y", "z"}, {2, 2, 2}, {{0, 1}, {1, 2}, {0, 2}}, ""};
  return EmpiricalModel(sc, std::move(tables));
}

}  // namespace

TEST(EmpiricalModel, RejectsBadTables) {
  MeasurementScenario sc{{"x", "y"}, {2, 2}, {{0, 1}}, ""};
  EXPECT_THROW(EmpiricalModel(sc, {{0.5, 0.5, 0.1, -0.1}}), InvariantViolation);
  EXPECT_THROW(EmpiricalModel(sc, {{0.5, 0.5, 0.1, 0.0}}), InvariantViolation);
  EXPECT_THROW(EmpiricalModel(sc, {{0.5, 0.5}}), SchemaError);
  MeasurementScenario uncovered{{"x", "y", "z"}, {2, 2, 2}, {{0, 1}}, ""};
  EXPECT_THROW(EmpiricalModel(uncovered, {{1, 0, 0, 0}}), SchemaError);
}

TEST(EmpiricalModel, DisturbanceIsAWarning) {
  // y is 0 in one context and 1 in the other.
  auto m = triangle({{1, 0, 0, 0}, {0, 0, 1, 0}, {1, 0, 0, 0}});
  EXPECT_FALSE(m.warnings().empty());
}

TEST(Sections, PossibleSectionsRespectOverlaps) {
  // x = y always, y = z always, x = z always: noncontextual.
  auto m = triangle({{0.5, 0, 0, 0.5}, {0.5, 0, 0, 0.5}, {0.5, 0, 0, 0.5}});
  auto s = possible_sections(m, 0);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].values, (std::vector<int>{0, 0}));
  auto r = is_logically_contextual(m);
  EXPECT_EQ(r.verdict, Verdict::NoncontextualLogically);
  ASSERT_TRUE(r.global_section.has_value());
  EXPECT_EQ(*r.global_section, (std::vector<int>{0, 0, 0}));
}

TEST(Sections, OddParityTriangleIsStronglyContextual) {
  // x = y, y = z, x != z
  auto m = triangle({{0.5, 0, 0, 0.5}, {0.5, 0, 0, 0.5}, {0, 0.5, 0.5, 0}});
  for (auto engine : {SearchEngine::Backtracking, SearchEngine::Exhaustive}) {
    auto r = is_logically_contextual(m, engine);
    EXPECT_EQ(r.verdict, Verdict::StronglyContextual);
    EXPECT_FALSE(r.global_section.has_value());
  }
}

TEST(Sections, ExtensionIsLexicographicallySmallest) {
  auto m = triangle({{0.5, 0, 0, 0.5}, {0.5, 0, 0, 0.5}, {0.5, 0, 0, 0.5}});
  Section s{{2}, {1}};
  for (auto engine : {SearchEngine::Backtracking, SearchEngine::Exhaustive}) {
    auto g = has_global_section_extending(m, s, engine);
    ASSERT_TRUE(g.has_value());
    EXPECT_EQ(*g, (std::vector<int>{1, 1, 1}));
  }
}

TEST(FrModel, LogicallyContextualWithWitness) {
  auto fr = presets::fr_setup();
  auto m = model_from_setup(fr);
  EXPECT_EQ(m.scenario().contexts, (std::vector<VariableSet>{{0, 1}, {0, 3}, {1, 2}, {2, 3}}));
  auto r = cross_checked_report(m);
  EXPECT_EQ(r.verdict, Verdict::LogicallyContextual);
  ASSERT_FALSE(r.failing_sections.empty());
  EXPECT_EQ(r.failing_sections[0], (Section{{2, 3}, {1, 1}}));
  Section fail_fail{{2, 3}, {0, 0}};
  auto b = has_global_section_extending(m, fail_fail, SearchEngine::Backtracking);
  auto e = has_global_section_extending(m, fail_fail, SearchEngine::Exhaustive);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b, e);
  EXPECT_EQ((*b)[2], 0);
  EXPECT_EQ((*b)[3], 0);
}

TEST(KcbsModel, LogicallyContextual) {
  auto m = model_from_setup(presets::kcbs_setup());
  EXPECT_EQ(m.scenario().contexts.size(), 5u);
  EXPECT_EQ(cross_checked_report(m).verdict, Verdict::LogicallyContextual);
}

TEST(CompatModels, Noncontextual) {
  auto [a, b] = presets::compat_demo_setups();
  EXPECT_EQ(cross_checked_report(model_from_setup(a)).verdict, Verdict::NoncontextualLogically);
  EXPECT_EQ(cross_checked_report(model_from_setup(b)).verdict, Verdict::NoncontextualLogically);
}

TEST(PrBox, StronglyContextual) {
  auto r = cross_checked_report(presets::pr_box_model());
  EXPECT_EQ(r.verdict, Verdict::StronglyContextual);
  EXPECT_EQ(r.failing_sections.size(), r.section_count);
}

TEST(Engines, PropertyAgreeOnRandomModels) {
  gen::Rng rng(21);
  for (int c = 0; c < 300; ++c) {
    auto m = gen::random_model(rng);
    bool degenerate = false;
    for (std::size_t k = 0; k < m.scenario().contexts.size(); ++k) {
      degenerate = degenerate || possible_sections(m, k).empty();
    }
    if (degenerate) {
      EXPECT_THROW(is_logically_contextual(m), InvariantViolation);
      continue;
    }
    auto b = is_logically_contextual(m, SearchEngine::Backtracking);
    auto e = is_logically_contextual(m, SearchEngine::Exhaustive);
    EXPECT_EQ(b.verdict, e.verdict);
    EXPECT_EQ(b.failing_sections, e.failing_sections);
    EXPECT_EQ(b.global_section, e.global_section);
    // A global section restricts to a possible section of every context.
    if (b.global_section) {
      for (std::size_t k = 0; k < m.scenario().contexts.size(); ++k) {
        Section s{m.scenario().contexts[k], {}};
        for (auto v : s.domain) s.values.push_back((*b.global_section)[v]);
        auto ps = possible_sections(m, k);
        EXPECT_NE(std::find(ps.begin(), ps.end(), s), ps.end());
      }
    }
  }
}
