#include <gtest/gtest.h>

#include "builders.hpp"
#include "ttbfl/harness/properties.hpp"
#include "ttbfl/harness/search.hpp"
#include "ttbfl/harness/shrink.hpp"
#include "ttbfl/reduction.hpp"
#include "ttbfl/substitution.hpp"
#include "ttbfl/typing.hpp"

namespace ttbfl::harness {
namespace {

using namespace ttbfl::testing;

GenConfig small(std::size_t cases) {
  GenConfig cfg;
  cfg.cases = cases;
  return cfg;
}

TEST(Suites, NamesRoundTrip) {
  for (Suite s : kAllSuites) EXPECT_EQ(suite_from_name(suite_name(s)), s);
  EXPECT_FALSE(suite_from_name("nope").has_value());
}

TEST(Suites, AllPassOnSmallRuns) {
  for (Suite s : kAllSuites) {
    PropertyReport r = run_suite(s, small(200));
    EXPECT_TRUE(r.passed()) << r.text();
    EXPECT_EQ(r.cases_run + r.skipped, 200u);
  }
}

TEST(Suites, ReportsAreDeterministicAcrossJobCounts) {
  GenConfig one = small(150);
  GenConfig four = one;
  four.jobs = 4;
  ScopedSubstitutionFault fault(SubstitutionFault::OffByOneBinderDepth);
  PropertyReport a = prop_subject_reduction(one);
  PropertyReport b = prop_subject_reduction(four);
  ASSERT_EQ(a.failures.size(), b.failures.size());
  EXPECT_EQ(a.obligations, b.obligations);
  for (std::size_t i = 0; i < a.failures.size(); ++i) {
    EXPECT_EQ(a.failures[i].case_index, b.failures[i].case_index);
    EXPECT_TRUE(alpha_equal(a.failures[i].term, b.failures[i].term));
  }
}

TEST(Suites, CanaryTripsUnderBrokenSubstitution) {
  ScopedSubstitutionFault fault(SubstitutionFault::OffByOneBinderDepth);
  GenConfig cfg = small(600);
  EXPECT_FALSE(prop_subject_reduction(cfg).passed());
  GenConfig diamond = cfg;
  diamond.max_size = 12;
  EXPECT_FALSE(prop_diamond_completion(diamond).passed());
}

TEST(Suites, ShrunkCounterexamplesStillFail) {
  GenConfig cfg = small(300);
  PropertyReport r;
  {
    ScopedSubstitutionFault fault(SubstitutionFault::OffByOneBinderDepth);
    r = prop_subject_reduction(cfg);
    ASSERT_FALSE(r.passed());
    TypeChecker tc(*cfg.domain, cfg.fuel);
    for (std::size_t i = 0; i < std::min(r.failures.size(), kShrinkLimit); ++i) {
      const Counterexample& c = r.failures[i];
      EXPECT_LE(c.term.size(), c.original.size());
      if (alpha_equal(c.term, c.original)) continue;
      // The shrunk term is still well-typed and still has a rejected reduct.
      ASSERT_TRUE(tc.check(c.ctx, c.term, *c.type).accepted());
      bool bad = false;
      for (const Term& b : one_step_reducts(c.term)) bad = bad || !tc.check(c.ctx, b, *c.type).accepted();
      EXPECT_TRUE(bad);
    }
  }
  EXPECT_NE(r.text().find("FAIL"), std::string::npos);
  EXPECT_EQ(r.to_json()["failures"].size(), r.failures.size());
}

TEST(Suites, RuleCoverageAboveOnePercent) {
  PropertyReport r = prop_generator(small(2000));
  std::size_t total = 0;
  for (const auto& [rule, n] : r.rule_nodes) total += n;
  for (Rule rule : kAllRules) EXPECT_GE(r.rule_nodes[rule] * 100, total) << rule_name(rule);
}

TEST(Shrink, CandidatesAreSmaller) {
  Term t = App(Lam(U(0), V(0)), Pi(Bot(), U(1)));
  auto cands = shrink_candidates(t);
  EXPECT_FALSE(cands.empty());
  for (const Term& c : cands) EXPECT_LE(c.size(), t.size());
  Term small = shrink(t, [](const Term& c) { return c.is(TermKind::App) || c.size() > 6; });
  EXPECT_TRUE(small.is(TermKind::App));
  EXPECT_EQ(small.size(), 3u);
}

TEST(Shrink, DropsBindersOnlyWhenUnused) {
  auto cands = shrink_candidates(Lam(Bot(), V(0)));
  for (const Term& c : cands) EXPECT_EQ(c.free_bound(), 0u);
}

TEST(OneStepReducts, IncludesTheDevelopment) {
  Term t = App(Lam(Bot(), App(Lam(Bot(), V(0)), V(0))), Bot());
  auto rs = one_step_reducts(t);
  bool dev = false;
  for (const Term& r : rs) {
    EXPECT_TRUE(par_step_check(t, r));
    dev = dev || alpha_equal(r, complete_development(t));
  }
  EXPECT_TRUE(dev);
  EXPECT_EQ(rs.size(), 3u);
}

TEST(Search, AbsurdPair) {
  Context ctx = Ctx({Bot()});
  Term inner = Abs(LT(0), V(0));
  Term outer = Abs(LT(inner), V(0));
  SearchResult ok = search_derivation(ctx, U(outer), U(inner));
  ASSERT_TRUE(ok.derivation);
  EXPECT_TRUE(check_derivation(ok.derivation, nat_omega_domain()).ok);
  SearchResult bad = search_derivation(ctx, U(inner), U(inner));
  EXPECT_TRUE(bad.context_ok);
  EXPECT_FALSE(bad.derivation);
  EXPECT_GT(bad.goals, 0u);
}

TEST(Search, SmallJudgements) {
  SearchConfig cfg;
  cfg.max_depth = 4;
  EXPECT_TRUE(search_derivation(Context(), L(2), LT(3), cfg).derivation);
  EXPECT_TRUE(search_derivation(Context(), LT(2), U(0), cfg).derivation);
  EXPECT_FALSE(search_derivation(Context(), L(3), LT(2), cfg).derivation);
  EXPECT_FALSE(search_derivation(Context(), U(0), U(0), cfg).derivation);
  // Trans through a level variable.
  Context c = Ctx({LT(W()), LT(V(0))});
  EXPECT_TRUE(search_derivation(c, V(0), LT(W()), cfg).derivation);
}

}  // namespace
}  // namespace ttbfl::harness
