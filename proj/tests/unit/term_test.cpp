#include <gtest/gtest.h>

#include "builders.hpp"
#include "random_terms.hpp"
#include "ttbfl/context.hpp"
#include "ttbfl/reduction.hpp"
#include "ttbfl/term.hpp"

namespace ttbfl {
namespace {

using namespace ttbfl::testing;

TEST(Term, ValueGrammar) {
  EXPECT_TRUE(is_value(Lam(Bot(), V(0))));
  EXPECT_FALSE(is_value(App(Lam(Bot(), V(0)), Bot())));
  EXPECT_TRUE(is_value(LT(2)));
  EXPECT_TRUE(is_value(Bot()));
  EXPECT_TRUE(is_value(L(3)));
  EXPECT_TRUE(is_value(Pi(Bot(), Bot())));
  EXPECT_TRUE(is_value(U(0)));
  EXPECT_FALSE(is_value(V(0)));
  EXPECT_FALSE(is_value(Abs(Bot(), V(0))));
}

TEST(Term, FreeVariables) {
  EXPECT_TRUE(free_above(V(0), 0));
  EXPECT_FALSE(free_above(Lam(Bot(), V(0)), 0));
  EXPECT_TRUE(free_above(Pi(Bot(), V(1)), 0));
  EXPECT_FALSE(free_above(Pi(Bot(), V(1)), 1));
  EXPECT_EQ(Pi(V(2), V(0)).free_bound(), 3u);
  EXPECT_TRUE(occurs_free(Lam(Bot(), V(2)), 1));
  EXPECT_FALSE(occurs_free(Lam(Bot(), V(2)), 0));
}

TEST(Term, AlphaEquality) {
  EXPECT_TRUE(alpha_equal(Lam(Bot(), V(0)), Lam(Bot(), V(0))));
  EXPECT_FALSE(alpha_equal(U(0), U(1)));
  EXPECT_FALSE(alpha_equal(Pi(Bot(), V(0)), Lam(Bot(), V(0))));
  EXPECT_FALSE(alpha_equal(L(0), W(0)));
}

TEST(Term, AlphaEqualityIsAnEquivalence) {
  RandomTerms gen(3);
  std::vector<Term> pool;
  for (int i = 0; i < 300; ++i) pool.push_back(gen.next(1 + i % 5, 2));
  for (const Term& a : pool) {
    ASSERT_TRUE(alpha_equal(a, a));
    for (const Term& b : pool) {
      bool ab = alpha_equal(a, b);
      ASSERT_EQ(ab, alpha_equal(b, a));
      if (ab) ASSERT_EQ(a.hash(), b.hash());
    }
  }
}

TEST(Term, ValuesDoNotStep) {
  RandomTerms gen(5);
  for (int i = 0; i < 3000; ++i) {
    Term t = gen.next(1 + i % 10, 1);
    if (is_value(t)) ASSERT_FALSE(cbn_step(t).has_value()) << t.debug();
  }
}

TEST(Term, StructureAccessors) {
  Term t = Pi(LT(W()), U(V(0)));
  EXPECT_EQ(t.arity(), 2u);
  EXPECT_FALSE(t.binds(0));
  EXPECT_TRUE(t.binds(1));
  EXPECT_EQ(t.size(), 5u);
  EXPECT_EQ(t.debug(), "Pi(LevelLt(Lvl omega), Univ(Var 0))");
  Term same = t.with_children(t.dom(), t.cod());
  EXPECT_TRUE(same.same_node(t));
}

TEST(Context, LookupShiftsIntoPlace) {
  // x : Level< omega, y : Level< x
  Context ctx = Ctx({LT(W()), LT(V(0))});
  EXPECT_EQ(ctx.lookup(0), LT(V(1)));
  EXPECT_EQ(ctx.lookup(1), LT(W()));
  EXPECT_THROW(ctx.lookup(2), std::out_of_range);
  EXPECT_EQ(ctx.prefix(1).size(), 1u);
  EXPECT_TRUE(ctx.extend(Bot()).prefix(2) == ctx);
}

}  // namespace
}  // namespace ttbfl
