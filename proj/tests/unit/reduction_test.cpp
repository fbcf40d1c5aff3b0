#include <gtest/gtest.h>

#include <algorithm>

#include "builders.hpp"
#include "named_oracle.hpp"
#include "random_terms.hpp"
#include "ttbfl/reduction.hpp"

namespace ttbfl {
namespace {

using namespace ttbfl::testing;

const Term kId = Lam(Bot(), V(0));
const Term kOmegaHalf = Lam(Bot(), App(V(0), V(0)));

bool contains(const std::vector<Term>& v, const Term& t) {
  return std::any_of(v.begin(), v.end(), [&](const Term& u) { return alpha_equal(u, t); });
}

TEST(Reduction, ParallelStep) {
  EXPECT_TRUE(par_step_check(App(kId, Bot()), Bot()));
  EXPECT_FALSE(par_step_check(Bot(), U(0)));
  EXPECT_TRUE(par_step_check(App(kId, App(kId, Bot())), App(kId, Bot())));
  EXPECT_TRUE(par_step_check(App(kId, App(kId, Bot())), Bot()));
  // The annotation is dropped by beta, so it need not reduce consistently.
  EXPECT_TRUE(par_step_check(App(Lam(App(kId, U(0)), V(0)), Bot()), Bot()));
  EXPECT_FALSE(par_step_check(U(0), U(1)));
}

TEST(Reduction, CompleteDevelopment) {
  EXPECT_EQ(complete_development(V(3)), V(3));
  EXPECT_EQ(complete_development(App(kId, App(kId, Bot()))), Bot());
  EXPECT_EQ(complete_development(App(V(0), App(kId, Bot()))), App(V(0), Bot()));
  std::uint64_t n = 0;
  complete_development(App(kId, App(kId, Bot())), n);
  EXPECT_EQ(n, 2u);
}

TEST(Reduction, Pars) {
  ParsResult r = pars(Bot(), Fuel{1});
  EXPECT_TRUE(r.normal);
  EXPECT_EQ(r.term, Bot());
  r = pars(App(Lam(U(1), V(0)), U(0)), Fuel{10});
  EXPECT_TRUE(r.normal);
  EXPECT_EQ(r.term, U(0));
  Term omega = App(kOmegaHalf, kOmegaHalf);
  r = pars(omega, Fuel{100});
  EXPECT_FALSE(r.normal);
  EXPECT_THROW(normalize(omega, Fuel{100}), FuelExhausted);
  // The loop is a fixpoint of one development step.
  EXPECT_EQ(complete_development(omega), omega);
}

TEST(Reduction, CallByName) {
  Term t = App(kId, U(0));
  EXPECT_EQ(cbn_step(App(kId, t)), t);
  EXPECT_FALSE(cbn_step(Lam(Bot(), App(kId, Bot()))).has_value());
  EXPECT_EQ(cbn_step(Abs(Bot(), App(kId, Bot()))), Abs(Bot(), Bot()));
  EXPECT_FALSE(cbn_step(App(V(0), App(kId, Bot()))).has_value());
  EvalResult e = cbn_eval(App(App(Lam(U(0), Lam(V(0), V(0))), Bot()), Lam(Bot(), V(0))), Fuel{10});
  EXPECT_TRUE(e.halted);
  EXPECT_EQ(e.term, Lam(Bot(), V(0)));
  EXPECT_EQ(e.steps, 2u);
  e = cbn_eval(App(kOmegaHalf, kOmegaHalf), Fuel{50});
  EXPECT_FALSE(e.halted);
}

TEST(Reduction, Conversion) {
  RandomTerms gen(1);
  Term t = gen.next(8, 1);
  EXPECT_EQ(convertible(t, t, Fuel{0}), Convertibility::Yes);
  EXPECT_EQ(convertible(U(App(Lam(LT(W()), V(0)), L(0))), U(0), Fuel{10}), Convertibility::Yes);
  EXPECT_EQ(convertible(Pi(Bot(), Bot()), Bot(), Fuel{10}), Convertibility::No);
  Term omega = App(kOmegaHalf, kOmegaHalf);
  EXPECT_EQ(convertible(omega, Bot(), Fuel{100}), Convertibility::Undecided);
}

TEST(Reduction, ReductsMatchOracleEnumeration) {
  RandomTerms gen(41);
  for (int i = 0; i < 3000; ++i) {
    Term a = gen.next(1 + i % 12, 2);
    auto mine = parallel_reducts(a, 100000);
    ASSERT_TRUE(mine.has_value());
    auto expected = oracle::one_step_reducts(a, 2);
    ASSERT_EQ(mine->size(), expected.size()) << a.debug();
    for (const Term& b : expected) {
      ASSERT_TRUE(contains(*mine, b)) << a.debug() << " missing " << b.debug();
      ASSERT_TRUE(par_step_check(a, b)) << a.debug() << " => " << b.debug();
    }
  }
}

TEST(Reduction, StepCheckRejectsNonReducts) {
  RandomTerms gen(43);
  int negatives = 0;
  for (int i = 0; i < 1500; ++i) {
    Term a = gen.next(1 + i % 9, 1);
    Term b = gen.next(1 + i % 9, 1);
    bool expected = contains(oracle::one_step_reducts(a, 1), b);
    ASSERT_EQ(par_step_check(a, b), expected) << a.debug() << " vs " << b.debug();
    negatives += !expected;
  }
  EXPECT_GT(negatives, 1000);
}

TEST(Reduction, DiamondAndCompletion) {
  RandomTerms gen(47);
  for (int i = 0; i < 2000; ++i) {
    Term a = gen.next(1 + i % 12, 2);
    Term dev = complete_development(a);
    ASSERT_TRUE(par_step_check(a, dev));
    for (const Term& b : oracle::one_step_reducts(a, 2)) {
      ASSERT_TRUE(par_step_check(b, dev)) << a.debug() << " via " << b.debug();
    }
  }
}

TEST(Reduction, CallByNameEmbedsInParallel) {
  RandomTerms gen(53);
  for (int i = 0; i < 3000; ++i) {
    Term a = gen.next(1 + i % 12, 1);
    if (auto b = cbn_step(a)) ASSERT_TRUE(par_step_check(a, *b)) << a.debug();
  }
}

TEST(Reduction, ConfluenceOfRandomTraces) {
  RandomTerms gen(59);
  std::mt19937_64 rng(59);
  for (int i = 0; i < 500; ++i) {
    Term a = gen.next(1 + i % 12, 1);
    Term left = a, right = a;
    for (int step = 0; step < 3; ++step) {
      auto l = oracle::one_step_reducts(left, 1);
      auto r = oracle::one_step_reducts(right, 1);
      left = l[rng() % l.size()];
      right = r[rng() % r.size()];
    }
    ParsResult ln = pars(left, Fuel{200}), rn = pars(right, Fuel{200});
    if (ln.normal && rn.normal) ASSERT_EQ(ln.term, rn.term) << a.debug();
  }
}

TEST(Reduction, ConversionIsInjective) {
  RandomTerms gen(61);
  for (int i = 0; i < 1000; ++i) {
    Term a1 = gen.next(1 + i % 6, 1), b1 = gen.next(1 + i % 6, 2);
    auto as = oracle::one_step_reducts(a1, 1);
    auto bs = oracle::one_step_reducts(b1, 2);
    Term a2 = as.back(), b2 = bs.back();
    ASSERT_EQ(convertible(Pi(a1, b1), Pi(a2, b2), Fuel{200}) == Convertibility::Yes,
              convertible(a1, a2, Fuel{200}) == Convertibility::Yes &&
                  convertible(b1, b2, Fuel{200}) == Convertibility::Yes);
    ASSERT_EQ(convertible(U(a1), U(a2), Fuel{200}), convertible(a1, a2, Fuel{200}));
    ASSERT_EQ(convertible(LT(a1), LT(a2), Fuel{200}), convertible(a1, a2, Fuel{200}));
  }
}

TEST(Reduction, Traces) {
  ReductionTrace trace = development_trace(App(kId, App(kId, App(kId, Bot()))), 10);
  EXPECT_TRUE(trace.valid());
  EXPECT_EQ(trace.terms.back(), Bot());
  EXPECT_EQ(trace.terms.size(), 2u);
  ReductionTrace bogus;
  bogus.terms = {Bot(), U(0)};
  EXPECT_FALSE(bogus.valid());
}

}  // namespace
}  // namespace ttbfl
