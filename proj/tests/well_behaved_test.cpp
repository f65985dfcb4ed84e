#include <gtest/gtest.h>

#include "behametric/well_behaved.hpp"

using namespace behametric;

TEST(WellBehaved, GrammarEvaluationsPassEveryCondition) {
  for (const TopBound& top : {TopBound::finite(1), TopBound::infinite()}) {
    SamplingPlan plan;
    plan.top = top;
    plan.seed = 5;
    for (const auto& ev : grammar_evaluations(top)) {
      WellBehavedReport r = check_well_behaved(ev, plan);
      EXPECT_TRUE(r.ok()) << ev.name << " under top " << top.to_string() << ": "
                          << (r.witnesses.empty() ? "" : r.witnesses.front().structure + " " + r.witnesses.front().detail);
      EXPECT_GT(r.samples, 0u);
    }
  }
}

TEST(WellBehaved, SquareSumOnlyUnderInfiniteTop) {
  auto names = [](const TopBound& top) {
    std::vector<std::string> out;
    for (const auto& ev : grammar_evaluations(top)) out.push_back(ev.name);
    return out;
  };
  auto finite = names(TopBound::finite(1));
  auto infinite = names(TopBound::infinite());
  EXPECT_EQ(std::count(finite.begin(), finite.end(), "diagsquare-sum"), 0);
  EXPECT_EQ(std::count(infinite.begin(), infinite.end(), "diagsquare-sum"), 1);
}

TEST(WellBehaved, MinimumOnFiniteSetsFailsWithKnownWitnesses) {
  for (const TopBound& top : {TopBound::finite(1), TopBound::infinite()}) {
    SamplingPlan plan;
    plan.top = top;
    WellBehavedReport r = check_well_behaved(finpow_min_evaluation(), plan, finpow_witnesses());
    EXPECT_TRUE(r.condition1_ok);
    ASSERT_NE(r.witness(2), nullptr);
    ASSERT_NE(r.witness(3), nullptr);
    EXPECT_EQ(r.witness(2)->structure, "{(0,1),(1,1)}");
    EXPECT_EQ(r.witness(3)->structure, "{0,1}");
    EXPECT_FALSE(r.ok());
  }
}

TEST(WellBehaved, MinimumFailsWithoutHintsToo) {
  // The sampler alone finds counterexamples for Conditions 2 and 3.
  SamplingPlan plan;
  plan.top = TopBound::finite(1);
  WellBehavedReport r = check_well_behaved(finpow_min_evaluation(), plan);
  EXPECT_FALSE(r.condition2_ok);
  EXPECT_FALSE(r.condition3_ok);
}

TEST(WellBehaved, ReportsAreReproducible) {
  SamplingPlan plan;
  plan.seed = 99;
  auto ev = grammar_evaluations(TopBound::infinite()).front();
  EXPECT_EQ(check_well_behaved(ev, plan).samples, check_well_behaved(ev, plan).samples);
}
