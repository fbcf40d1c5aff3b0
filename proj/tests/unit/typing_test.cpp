#include <gtest/gtest.h>

#include "builders.hpp"
#include "ttbfl/derivation.hpp"
#include "ttbfl/derivation_json.hpp"
#include "ttbfl/typing.hpp"

namespace ttbfl {
namespace {

using namespace ttbfl::testing;

class Typing : public ::testing::Test {
 protected:
  TypeChecker tc{nat_omega_domain()};

  // Accepted, and the emitted derivation concludes the asked judgement and validates.
  void expect_checks(const Context& ctx, const Term& a, const Term& type) {
    Judgement j = tc.check(ctx, a, type);
    ASSERT_TRUE(j.accepted()) << j.diagnostic;
    EXPECT_EQ(*j.derivation->term, a);
    EXPECT_EQ(*j.derivation->type, type);
    EXPECT_TRUE(j.derivation->ctx == ctx);
    DerivationReport r = check_derivation(j.derivation, nat_omega_domain());
    EXPECT_TRUE(r.ok) << (r.diagnostics.empty() ? "" : r.diagnostics.front());
  }

  void expect_rejected(const Context& ctx, const Term& a, const Term& type) {
    Judgement j = tc.check(ctx, a, type);
    EXPECT_EQ(j.verdict, Verdict::Rejected) << "accepted " << a.debug();
    EXPECT_FALSE(j.diagnostic.empty());
  }
};

TEST_F(Typing, LvlDerivationsByHand) {
  auto two_lt_three = derive::lvl(derive::nil(), LevelValue::finite(2), LevelValue::finite(3));
  EXPECT_TRUE(check_derivation(two_lt_three, nat_domain()).ok);
  EXPECT_EQ(*two_lt_three->type, LT(3));

  auto u0 = derive::univ(derive::lvl(derive::nil(), LevelValue::finite(0), LevelValue::finite(1)));
  auto level2 = derive::level_lt(u0, two_lt_three);
  EXPECT_EQ(*level2->term, LT(2));
  EXPECT_EQ(*level2->type, U(0));
  EXPECT_TRUE(check_derivation(level2, nat_domain()).ok);

  auto bad = derive::lvl(derive::nil(), LevelValue::finite(3), LevelValue::finite(3));
  DerivationReport r = check_derivation(bad, nat_domain());
  EXPECT_FALSE(r.ok);
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics.front().rfind("Lvl: i < j fails", 0), 0u) << r.diagnostics.front();
}

TEST_F(Typing, CheckerReproducesConcreteJudgements) {
  expect_checks(Context(), L(2), LT(3));
  expect_checks(Context(), LT(2), U(0));
  expect_checks(Context(), U(0), U(1));
  expect_rejected(Context(), L(3), LT(3));
  expect_rejected(Context(), U(1), U(1));
  // omega in the finite domain is not a level at all.
  EXPECT_FALSE(TypeChecker(nat_domain()).infer(Context(), W()).accepted());
}

TEST_F(Typing, InferPicksMinimalUniverse) {
  Judgement j = tc.infer(Context(), U(0));
  ASSERT_TRUE(j.accepted());
  EXPECT_EQ(j.type(), U(1));
  j = tc.infer(Context(), LT(W()));
  ASSERT_TRUE(j.accepted());
  EXPECT_EQ(j.type(), U(0));
  j = tc.infer(Context(), L(5));
  ASSERT_TRUE(j.accepted());
  EXPECT_EQ(j.type(), LT(6));
}

TEST_F(Typing, TransContext) {
  // x : Level< omega, y : Level< x
  Context ctx = Ctx({LT(W()), LT(V(0))});
  ASSERT_TRUE(tc.check_context(ctx).accepted());
  Judgement j = tc.level_lt_check(ctx, V(0), W());
  ASSERT_TRUE(j.accepted()) << j.diagnostic;
  EXPECT_EQ(j.derivation->rule, Rule::Trans);
  EXPECT_TRUE(check_derivation(j.derivation, nat_omega_domain()).ok);
  expect_checks(ctx, V(0), LT(W()));
  expect_checks(ctx, U(V(0)), U(W()));
  expect_rejected(ctx, V(1), LT(V(0)));
  EXPECT_TRUE(tc.level_lt_check(Context(), L(0), L(1)).accepted());
  EXPECT_FALSE(tc.level_lt_check(Context(), L(1), L(1)).accepted());
}

TEST_F(Typing, CumulativityAndEtaExpansion) {
  // f : U 2 -> U 0
  Context ctx = Ctx({Pi(U(2), U(0))});
  Judgement j = tc.infer(ctx, V(0));
  ASSERT_TRUE(j.accepted());
  EXPECT_EQ(j.type(), Pi(U(2), U(0)));
  expect_rejected(ctx, V(0), Pi(U(1), U(1)));
  expect_checks(ctx, Lam(U(1), App(V(1), V(0))), Pi(U(1), U(1)));
}

TEST_F(Typing, PolymorphicIdentityType) {
  // Pi (j : Level< omega) (A : U j) (x : A). A
  Term ty = Pi(LT(W()), Pi(U(V(0)), Pi(V(0), V(1))));
  Judgement j = tc.infer(Context(), ty);
  ASSERT_TRUE(j.accepted()) << j.diagnostic;
  EXPECT_EQ(j.type(), U(W()));
  expect_checks(Context(), ty, U(W()));
  Term id = Lam(LT(W()), Lam(U(V(0)), Lam(V(0), V(0))));
  expect_checks(Context(), id, ty);
  expect_rejected(Context(), ty, U(L(7)));
}

TEST_F(Typing, AbsurdRegression) {
  // x : Bot
  Context ctx = Ctx({Bot()});
  Term inner = Abs(LT(0), V(0));
  Term outer = Abs(LT(inner), V(0));
  expect_checks(ctx, U(outer), U(inner));
  expect_rejected(ctx, U(inner), U(inner));
}

TEST_F(Typing, ContextChecking) {
  EXPECT_TRUE(tc.check_context(Context()).accepted());
  EXPECT_TRUE(tc.check_context(Ctx({LT(W()), LT(V(0))})).accepted());
  EXPECT_FALSE(tc.check_context(Ctx({V(0)})).accepted());
  EXPECT_FALSE(tc.check_context(Ctx({L(0)})).accepted());
}

TEST_F(Typing, ApplicationSubstitutesIntoCodomain) {
  Term id = Lam(U(0), Lam(V(0), V(0)));
  Judgement j = tc.infer(Context(), App(id, Bot()));
  ASSERT_TRUE(j.accepted()) << j.diagnostic;
  EXPECT_EQ(j.type(), Pi(Bot(), Bot()));
  expect_checks(Context(), App(Lam(LT(W()), U(V(0))), L(3)), U(W()));
  // The reduct U 3 lives in U 4 but the redex does not: the body U x only
  // fits universes above every x < omega.
  expect_checks(Context(), U(3), U(4));
  expect_rejected(Context(), App(Lam(LT(W()), U(V(0))), L(3)), U(4));
  expect_rejected(Context(), App(Bot(), Bot()), Bot());
  expect_rejected(Context(), App(id, U(0)), Pi(U(0), U(0)));
}

TEST_F(Typing, AbsurdNeedsAnInconsistentContext) {
  expect_checks(Ctx({Bot()}), Abs(U(3), V(0)), U(3));
  expect_rejected(Context(), Abs(Bot(), Lam(Bot(), V(0))), Bot());
  expect_rejected(Context(), Lam(Bot(), V(0)), Bot());
}

TEST_F(Typing, FuelExhaustionIsItsOwnVerdict) {
  // x : Bot |- (\y:Bot. y y)(\y:Bot. y y) used as a level bound
  Term half = Lam(Bot(), App(V(0), V(0)));
  Term loop_type = LT(Abs(LT(W()), App(half, half)));
  Judgement j = TypeChecker(nat_omega_domain(), Fuel{50}).check(Ctx({Bot()}), L(0), loop_type);
  EXPECT_NE(j.verdict, Verdict::Accepted);
}

TEST_F(Typing, LamPrimeElaboration) {
  // From . |- Pi x:Bot. Bot : U 0 and x:Bot |- x : Bot.
  Judgement pi = tc.infer(Context(), Pi(Bot(), Bot()));
  ASSERT_TRUE(pi.accepted());
  Judgement body = tc.infer(Ctx({Bot()}), V(0));
  ASSERT_TRUE(body.accepted());
  DerivationPtr lam = elaborate_lam_prime(pi.derivation, body.derivation);
  EXPECT_EQ(*lam->term, Lam(Bot(), V(0)));
  EXPECT_TRUE(check_derivation(lam, nat_omega_domain()).ok);

  // Through a Cumul step: Pi x:Bot. Bot lifted to U 5.
  Judgement lifted = tc.check(Context(), Pi(Bot(), Bot()), U(5));
  ASSERT_TRUE(lifted.accepted());
  Judgement cumul = tc.level_lt_check(Context(), L(0), L(5));
  DerivationPtr via_cumul = derive::cumul(pi.derivation, cumul.derivation);
  DerivationPtr lam5 = elaborate_lam_prime(via_cumul, body.derivation);
  EXPECT_TRUE(check_derivation(lam5, nat_omega_domain()).ok);

  // Polymorphic identity, innermost binder first.
  Term ty = Pi(LT(W()), Pi(U(V(0)), Pi(V(0), V(1))));
  Context inner = Ctx({LT(W()), U(V(0)), V(0)});
  Judgement x = tc.infer(inner, V(0));
  Judgement pi3 = tc.infer(Ctx({LT(W()), U(V(0))}), Pi(V(0), V(1)));
  ASSERT_TRUE(x.accepted() && pi3.accepted());
  DerivationPtr l3 = elaborate_lam_prime(pi3.derivation, x.derivation);
  Judgement pi2 = tc.infer(Ctx({LT(W())}), Pi(U(V(0)), Pi(V(0), V(1))));
  ASSERT_TRUE(pi2.accepted());
  DerivationPtr l2 = elaborate_lam_prime(pi2.derivation, l3);
  Judgement pi1 = tc.infer(Context(), ty);
  DerivationPtr l1 = elaborate_lam_prime(pi1.derivation, l2);
  EXPECT_EQ(*l1->term, Lam(LT(W()), Lam(U(V(0)), Lam(V(0), V(0)))));
  EXPECT_TRUE(check_derivation(l1, nat_omega_domain()).ok);

  Judgement mty = tc.infer(Context(), Bot());
  EXPECT_THROW(elaborate_lam_prime(mty.derivation, body.derivation), InversionFailure);
}

TEST_F(Typing, DerivationCheckerCatchesTampering) {
  Judgement j = tc.check(Ctx({Pi(U(2), U(0))}), Lam(U(1), App(V(1), V(0))), Pi(U(1), U(1)));
  ASSERT_TRUE(j.accepted());
  auto tampered = std::make_shared<Derivation>(*j.derivation);
  tampered->type = Pi(U(1), U(0));
  EXPECT_FALSE(check_derivation(tampered, nat_omega_domain()).ok);
  auto wrong_ctx = std::make_shared<Derivation>(*j.derivation);
  wrong_ctx->ctx = Context();
  EXPECT_FALSE(check_derivation(wrong_ctx, nat_omega_domain()).ok);
  // A Conv node whose sides are not convertible.
  DerivationPtr two = tc.infer(Context(), L(2)).derivation;
  DerivationPtr sort = tc.infer(Context(), LT(2)).derivation;
  DerivationPtr conv = derive::conv(two, sort);
  DerivationReport r = check_derivation(conv, nat_omega_domain());
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.diagnostics.front().rfind("Conv:", 0), 0u);
}

TEST_F(Typing, JsonRoundTrip) {
  Judgement j = tc.check(Context(), Lam(LT(W()), Lam(U(V(0)), Lam(V(0), V(0)))),
                         Pi(LT(W()), Pi(U(V(0)), Pi(V(0), V(1)))));
  ASSERT_TRUE(j.accepted());
  nlohmann::json doc = derivation_to_json(j.derivation);
  DerivationPtr back = derivation_from_json(nlohmann::json::parse(doc.dump()));
  EXPECT_TRUE(check_derivation(back, nat_omega_domain()).ok);
  EXPECT_EQ(derivation_to_json(back), doc);
  EXPECT_EQ(term_from_json(term_to_json(U(W(3)))), U(W(3)));
  EXPECT_THROW(term_from_json(nlohmann::json::parse(R"(["Pi", ["Mty"]])")), std::invalid_argument);
}

TEST_F(Typing, Weakening) {
  Judgement j = tc.check(Ctx({LT(W()), LT(V(0))}), U(V(0)), U(W()));
  ASSERT_TRUE(j.accepted());
  Judgement wf = tc.check_context(Ctx({LT(W()), LT(V(0)), Bot()}));
  ASSERT_TRUE(wf.accepted());
  DerivationPtr w = weaken(j.derivation, wf.derivation);
  EXPECT_EQ(*w->term, U(V(1)));
  EXPECT_TRUE(check_derivation(w, nat_omega_domain()).ok);
}

}  // namespace
}  // namespace ttbfl
