#include <gtest/gtest.h>

#include "wfp/errors.hpp"
#include "wfp/presets.hpp"
#include "wfp/reasoning.hpp"
#include "wfp/verify.hpp"

using namespace wfp;

// Quick passes over the randomized suites with seeds other than the ones the
// acceptance run pins.
class Suites : public ::testing::TestWithParam<std::string> {};

TEST_P(Suites, PassWithSeed2) {
  auto r = run_suite(GetParam(), 2);
  EXPECT_GE(r.cases, 200u);
  EXPECT_GT(r.checks, 0u);
  for (const auto& f : r.failures) ADD_FAILURE() << f;
}

INSTANTIATE_TEST_SUITE_P(Theorems, Suites,
                         ::testing::Values("negation", "reduction", "symmetric", "endpoints",
                                           "theorem1", "oracle"));

TEST(SuiteRunner, RejectsUnknownAndClampsCases) {
  EXPECT_THROW(run_suite("nope", 1), SchemaError);
  EXPECT_EQ(run_suite("negation", 1, 5).cases, 200u);
  auto names = suite_names();
  EXPECT_EQ(names.size(), 7u);
}

TEST(SuiteRunner, SeedDeterminesResult) {
  auto a = run_suite("endpoints", 99);
  auto b = run_suite("endpoints", 99);
  EXPECT_EQ(a.checks, b.checks);
  EXPECT_EQ(a.notes, b.notes);
}

TEST(Generators, HardySetupAlwaysHasTheChain) {
  gen::Rng rng(31);
  for (int c = 0; c < 30; ++c) {
    auto s = gen::hardy_setup(rng);
    SetupProbabilities pm(s);
    auto cert = find_paradox(pm);
    ASSERT_TRUE(cert.has_value());
    EXPECT_NO_THROW(validate_certificate(pm, *cert));
    EXPECT_LT(cert->p_postselection, 1.0);
    EXPECT_NE(cross_checked_report(model_from_setup(s)).verdict, Verdict::NoncontextualLogically);
  }
}

TEST(Generators, Theorem1OnRandomSetups) {
  gen::Rng rng(37);
  for (int c = 0; c < 100; ++c) {
    auto s = gen::random_setup(rng);
    auto report = cross_checked_report(model_from_setup(s));
    SetupProbabilities pm(s);
    auto cert = find_paradox(pm);
    if (report.verdict == Verdict::NoncontextualLogically) EXPECT_FALSE(cert.has_value());
    if (cert) {
      EXPECT_NO_THROW(validate_certificate(pm, *cert));
      EXPECT_TRUE(check_deterministic_endpoints(*cert));
    }
  }
}
