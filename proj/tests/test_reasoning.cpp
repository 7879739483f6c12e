#include <gtest/gtest.h>

#include <algorithm>

#include "wfp/errors.hpp"
#include "wfp/presets.hpp"
#include "wfp/reasoning.hpp"
#include "wfp/verify.hpp"

using namespace wfp;

namespace {

Statement inference(Event a, Event c) {
  return Statement{StatementKind::Inference, std::move(a), std::move(c), 1.0, std::nullopt};
}

bool derived(const std::vector<Statement>& all, const Statement& s) {
  return std::find(all.begin(), all.end(), s) != all.end();
}

}  // namespace

TEST(Statements, FrCertainInferences) {
  auto fr = presets::fr_setup();
  SetupProbabilities pm(fr);
  auto all = derive_statements(pm);
  EXPECT_TRUE(derived(all, inference(parse_event(fr, "u=ok"), parse_event(fr, "b=1"))));
  EXPECT_TRUE(derived(all, inference(parse_event(fr, "b=1"), parse_event(fr, "a=1"))));
  EXPECT_TRUE(derived(all, inference(parse_event(fr, "a=1"), parse_event(fr, "w=fail"))));
  // Across incompatible agents nothing is derived.
  EXPECT_FALSE(derived(all, inference(parse_event(fr, "u=ok"), parse_event(fr, "a=1"))));
  for (const auto& s : all) {
    EXPECT_TRUE(pm.within_context(s.variables()));
    if (s.kind == StatementKind::Inference) EXPECT_GE(s.probability, 1.0 - 1e-9);
  }
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
}

TEST(Trust, SharedContext) {
  SetupProbabilities pm(presets::fr_setup());
  auto t = trust_graph(pm);
  EXPECT_TRUE(t.trusts(2, 1));
  EXPECT_FALSE(t.trusts(2, 0));
  EXPECT_TRUE(t.trusts_all({0}, {1, 3}));
}

TEST(FindParadox, FrChain) {
  auto fr = presets::fr_setup();
  SetupProbabilities pm(fr);
  auto cert = find_paradox(pm);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->postselection, parse_event(fr, "u=ok,w=ok"));
  EXPECT_NEAR(cert->p_postselection, 1.0 / 12.0, 1e-9);
  EXPECT_EQ(cert->chain.start, cert->postselection);
  ASSERT_EQ(cert->chain.links.size(), 3u);
  EXPECT_EQ(cert->chain.links[0].antecedent, parse_event(fr, "u=ok"));
  EXPECT_EQ(cert->chain.links[0].consequent, parse_event(fr, "b=1"));
  EXPECT_EQ(cert->chain.links[1].consequent, parse_event(fr, "a=1"));
  EXPECT_EQ(cert->chain.links[2].consequent, parse_event(fr, "w=fail"));
  EXPECT_EQ(cert->contradicted_start, parse_event(fr, "w=ok"));
  EXPECT_EQ(cert->contradicted_end, parse_event(fr, "w=fail"));
  EXPECT_NO_THROW(validate_certificate(pm, *cert));
  EXPECT_TRUE(check_deterministic_endpoints(*cert));
  auto g = reference_graph(*cert, pm.names(), pm.outcome_labels());
  EXPECT_TRUE(has_directed_cycle(g));
  EXPECT_NE(to_dot(g).find("digraph"), std::string::npos);
}

TEST(FindParadox, KcbsChain) {
  auto k = presets::kcbs_setup();
  SetupProbabilities pm(k);
  auto cert = find_paradox(pm);
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->postselection, parse_event(k, "a1=1,a5=0"));
  EXPECT_NEAR(cert->p_postselection, 1.0 / 9.0, 1e-9);
  std::vector<Event> expected{parse_event(k, "a5=0"), parse_event(k, "a4=1"),
                              parse_event(k, "a3=0"), parse_event(k, "a2=1"),
                              parse_event(k, "a1=0")};
  ASSERT_EQ(cert->chain.links.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(cert->chain.links[i].antecedent, expected[i]);
    EXPECT_EQ(cert->chain.links[i].consequent, expected[i + 1]);
    EXPECT_NEAR(cert->chain.links[i].probability, 1.0, 1e-9);
  }
  EXPECT_NO_THROW(validate_certificate(pm, *cert));
  EXPECT_TRUE(has_directed_cycle(reference_graph(*cert, pm.names())));
}

TEST(FindParadox, LengthBound) {
  SetupProbabilities pm(presets::kcbs_setup());
  EXPECT_FALSE(find_paradox(pm, 3).has_value());
  EXPECT_TRUE(find_paradox(pm, 4).has_value());
}

TEST(FindParadox, NoneWithoutContextuality) {
  auto [a, b] = presets::compat_demo_setups();
  EXPECT_FALSE(find_paradox(SetupProbabilities(a)).has_value());
  EXPECT_FALSE(find_paradox(SetupProbabilities(b)).has_value());
}

TEST(FindParadox, NoSymmetricParadoxInQuantumPresets) {
  EXPECT_FALSE(find_symmetric_paradox(SetupProbabilities(presets::fr_setup())).has_value());
  EXPECT_FALSE(find_symmetric_paradox(SetupProbabilities(presets::kcbs_setup())).has_value());
}

TEST(FindParadox, PrBoxModel) {
  auto m = presets::pr_box_model();
  ModelProbabilities pm(m);
  auto cert = find_paradox(pm);
  ASSERT_TRUE(cert.has_value());
  EXPECT_NO_THROW(validate_certificate(pm, *cert));
  EXPECT_TRUE(check_deterministic_endpoints(*cert));
  // Every link of the PR box is an equivalence.
  EXPECT_TRUE(find_symmetric_paradox(pm).has_value());
}

TEST(Certificate, TamperingIsDetected) {
  SetupProbabilities pm(presets::fr_setup());
  auto cert = *find_paradox(pm);
  auto bad = cert;
  bad.p_postselection = 0.25;
  EXPECT_THROW(validate_certificate(pm, bad), VerificationFailure);
  bad = cert;
  bad.chain.links.pop_back();
  EXPECT_THROW(validate_certificate(pm, bad), VerificationFailure);
  bad = cert;
  bad.chain.links[1].probability = 0.5;
  EXPECT_THROW(validate_certificate(pm, bad), VerificationFailure);
}

TEST(Negation, FrContrapositive) {
  auto fr = presets::fr_setup();
  SetupProbabilities pm(fr);
  auto n = negate_inference(pm, inference(parse_event(fr, "a=1"), parse_event(fr, "w=fail")));
  EXPECT_EQ(n.antecedent, parse_event(fr, "w=ok"));
  EXPECT_EQ(n.consequent, parse_event(fr, "a=0"));
  EXPECT_NEAR(n.probability, 1.0, 1e-9);
  EXPECT_THROW(negate_inference(pm, inference(parse_event(fr, "u=ok"), parse_event(fr, "a=1"))),
               PreconditionError);
}

TEST(Reduction, RequiresCommutingFamilies) {
  auto fr = presets::fr_setup();
  // u and a are not jointly measurable.
  EXPECT_THROW(reduce_triple(fr, inference(parse_event(fr, "u=ok"), parse_event(fr, "b=1")),
                             inference(parse_event(fr, "b=1"), parse_event(fr, "a=1"))),
               PreconditionError);
}

TEST(Reduction, CommutingChain) {
  gen::Rng rng(4);
  // Basis index k of two qubits; agent outcomes are functions of k.
  std::vector<std::vector<int>> labels{{0, 1, 1, 0}, {0, 1, 1, 1}, {1, 0, 0, 0}};
  auto s = gen::commuting_setup(rng, 2, labels, {0.5, 0.5, 0.5, 0.5});
  Event c({{0, 1}}), b({{1, 1}}), a({{2, 0}});
  auto r = reduce_triple(s, inference(c, b), inference(b, a));
  EXPECT_EQ(r.antecedent, c);
  EXPECT_EQ(r.consequent, a);
  EXPECT_NEAR(r.probability, 1.0, 1e-9);
  auto sym = reduce_symmetric_chain(s, {Event({{1, 0}}), Event({{2, 1}})});
  EXPECT_NEAR(sym.forward.probability, 1.0, 1e-9);
  EXPECT_NEAR(sym.backward.probability, 1.0, 1e-9);
  EXPECT_NEAR(sym.contradiction_mass, 0.0, 1e-9);
}

TEST(Yablo, FiniteSetupIsBlocked) {
  gen::Rng rng(8);
  for (std::size_t n : {3u, 4u}) {
    std::vector<std::size_t> order;
    auto s = gen::yablo_setup(rng, n, &order);
    std::vector<Statement> st;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        st.push_back(inference(Event({{order[i], 1}}), Event({{order[j], 0}})));
      }
    }
    auto v = check_yablo_blocked(s, st);
    EXPECT_TRUE(v.all_compatible);
    EXPECT_TRUE(v.statements_hold);
    EXPECT_TRUE(v.blocked());
  }
}

TEST(Classical, LiarAndYablo) {
  for (std::size_t n : {1u, 2u, 5u}) {
    auto liar = presets::liar_chain(n);
    EXPECT_TRUE(consistent_assignments(liar).empty());
    EXPECT_TRUE(has_directed_cycle(reference_graph(liar)));
  }
  auto y = presets::yablo_prefix(4);
  auto sol = consistent_assignments(y);
  ASSERT_EQ(sol.size(), 1u);
  EXPECT_EQ(sol[0], (std::vector<bool>{false, false, false, true}));
  EXPECT_FALSE(has_directed_cycle(reference_graph(y)));
}

TEST(Graph, CycleDetection) {
  ReferenceGraph g{{"a", "b", "c"}, {{1}, {2}, {}}};
  EXPECT_FALSE(has_directed_cycle(g));
  g.adjacency[2] = {0};
  EXPECT_TRUE(has_directed_cycle(g));
  ReferenceGraph self{{"a"}, {{0}}};
  EXPECT_TRUE(has_directed_cycle(self));
}
