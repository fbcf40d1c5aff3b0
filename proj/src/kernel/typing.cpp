#include "ttbfl/typing.hpp"

#include <unordered_set>
#include <vector>

#include "ttbfl/substitution.hpp"

namespace ttbfl {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Accepted: return "accepted";
    case Verdict::Rejected: return "rejected";
    case Verdict::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

namespace {

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One checker run. `wf` arguments are derivations of `|- G` and stand for
// the context G itself.
class Engine {
 public:
  Engine(const LevelDomain& domain, Fuel fuel, const TypeChecker::Printer& printer)
      : domain_(domain), fuel_(fuel), printer_(printer) {}

  DerivationPtr wf_context(const Context& ctx) {
    DerivationPtr wf = derive::nil();
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      try {
        wf = derive::cons(wf, as_universe(wf, infer(wf, ctx.entry(i)), "Cons"));
      } catch (const TypeError& e) {
        throw TypeError("context entry " + std::to_string(i) + ": " + e.what());
      }
    }
    return wf;
  }

  DerivationPtr infer(const DerivationPtr& wf, const Term& a) {
    switch (a.kind()) {
      case TermKind::Var:
        if (a.index() >= wf->ctx.size()) {
          throw TypeError("Var: unbound variable #" + std::to_string(a.index()));
        }
        return derive::var(wf, a.index());
      case TermKind::Lvl:
        return derive::lvl(wf, a.level(), above(a.level()));
      case TermKind::Univ:
        return derive::univ(as_level(wf, infer(wf, a.operand()), "Univ"));
      case TermKind::LevelLt:
        return derive::level_lt(bottom_universe(wf), as_level(wf, infer(wf, a.operand()), "Level<"));
      case TermKind::Mty:
        return derive::mty(bottom_universe(wf));
      case TermKind::Pi:
        return infer_pi(wf, a.dom(), a.cod());
      case TermKind::Lam: {
        DerivationPtr dom = as_universe(wf, infer(wf, a.ann()), "Lam");
        DerivationPtr body = infer(derive::cons(wf, dom), a.body());
        DerivationPtr pi = infer_pi(wf, a.ann(), *body->type);
        return derive::lam(pi->premises[0], pi, body);
      }
      case TermKind::App: {
        DerivationPtr fun = as_pi(wf, infer(wf, a.fun()));
        return derive::app(fun, check(wf, a.arg(), fun->type->dom()));
      }
      case TermKind::Absurd: {
        DerivationPtr sort = as_universe(wf, infer(wf, a.ann()), "Abs");
        return derive::abs(sort, check(wf, a.scrut(), Term::mty()));
      }
    }
    throw TypeError("unknown term");
  }

  DerivationPtr check(const DerivationPtr& wf, const Term& a, const Term& type) {
    switch (a.kind()) {
      case TermKind::Lam:
        return check_lam(wf, a, type);
      case TermKind::App:
        if (a.fun().is(TermKind::Lam)) {
          // Check the redex the way it would have been built: the function
          // against Pi x:A. T and the argument against A.
          // The codomain is T itself, or T with the argument abstracted.
          const Term& ann = a.fun().ann();
          Term plain = shift(type, 1);
          Term dependent = abstract(type, a.arg());
          for (const Term* cod : {&plain, &dependent}) {
            if (cod == &dependent && alpha_equal(dependent, plain)) break;
            try {
              DerivationPtr fun = check_lam(wf, a.fun(), Term::pi(ann, *cod));
              return derive::app(fun, check(wf, a.arg(), ann));
            } catch (const TypeError&) {
            }
          }
        }
        break;
      case TermKind::Mty:
        if (auto target = head_form(type, TermKind::Univ)) {
          return conv_to(wf, derive::mty(infer(wf, *target)), type);
        }
        break;
      case TermKind::LevelLt:
        if (auto target = head_form(type, TermKind::Univ)) {
          DerivationPtr bound = as_level(wf, infer(wf, a.operand()), "Level<");
          return conv_to(wf, derive::level_lt(infer(wf, *target), bound), type);
        }
        break;
      case TermKind::Pi:
        if (auto target = head_form(type, TermKind::Univ)) {
          const Term& k = target->operand();
          DerivationPtr dom = check(wf, a.dom(), *target);
          DerivationPtr cod = check(derive::cons(wf, dom), a.cod(), Term::univ(shift(k, 1)));
          return conv_to(wf, derive::pi(dom, cod), type);
        }
        break;
      case TermKind::Univ:
        if (auto target = head_form(type, TermKind::Univ)) {
          if (DerivationPtr lt = level_lt(wf, a.operand(), target->operand())) {
            return conv_to(wf, derive::univ(lt), type);
          }
        }
        break;
      case TermKind::Lvl:
        if (auto target = head_form(type, TermKind::LevelLt)) {
          Term bound = nf(target->operand());
          if (bound.is(TermKind::Lvl) && domain_.lt(a.level(), bound.level())) {
            return conv_to(wf, derive::lvl(wf, a.level(), bound.level()), type);
          }
        }
        break;
      default:
        break;
    }
    return check_by_subsumption(wf, a, type);
  }

  // ctx |- k : Level< l, or null. `start` may carry an existing typing of k.
  DerivationPtr level_lt(const DerivationPtr& wf, const Term& k, const Term& l, DerivationPtr start = nullptr) {
    Term target = nf(l);
    auto finish = [&](const DerivationPtr& d) { return conv_to(wf, d, Term::level_lt(l)); };
    try {
      if (k.is(TermKind::Lvl) && target.is(TermKind::Lvl)) {
        if (!domain_.lt(k.level(), target.level())) return nullptr;
        return finish(derive::lvl(wf, k.level(), target.level()));
      }
      DerivationPtr d = normalized_bound(wf, as_level(wf, start ? start : infer(wf, k), "Trans"));
      std::unordered_set<Term, TermHash> visited;
      for (;;) {
        const Term& n = d->type->operand();
        if (alpha_equal(n, target)) return finish(d);
        if (n.is(TermKind::Lvl)) {
          if (!target.is(TermKind::Lvl) || !domain_.lt(n.level(), target.level())) return nullptr;
          return finish(derive::trans(d, derive::lvl(wf, n.level(), target.level())));
        }
        if (!visited.insert(n).second) return nullptr;
        d = derive::trans(d, normalized_bound(wf, as_level(wf, infer(wf, n), "Trans")));
      }
    } catch (const TypeError&) {
      return nullptr;
    }
  }

  std::string show(const DerivationPtr& wf, const Term& t) const {
    return printer_ ? printer_(wf->ctx, t) : t.debug();
  }

 private:
  Term nf(const Term& t) { return normalize(t, fuel_); }

  LevelValue above(const LevelValue& v) {
    if (!domain_.contains(v)) throw TypeError("Lvl: " + v.to_string() + " is not a level of " + std::string(domain_.name()));
    try {
      return domain_.next_above(v);
    } catch (const std::overflow_error&) {
      throw TypeError("Lvl: no level above " + v.to_string());
    }
  }

  // U 0 : U 1
  DerivationPtr bottom_universe(const DerivationPtr& wf) {
    LevelValue b = domain_.bottom();
    return derive::univ(derive::lvl(wf, b, above(b)));
  }

  // `type` itself when it already has the head, else its normal form if that does.
  std::optional<Term> head_form(const Term& type, TermKind head) {
    if (type.is(head)) return type;
    Term n = nf(type);
    if (n.is(head)) return n;
    return std::nullopt;
  }

  DerivationPtr sort_of(const DerivationPtr& wf, const Term& type) {
    return as_universe(wf, infer(wf, type), "Conv");
  }

  DerivationPtr conv_to(const DerivationPtr& wf, const DerivationPtr& d, const Term& type) {
    if (alpha_equal(*d->type, type)) return d;
    return derive::conv(d, sort_of(wf, type), fuel_);
  }

  DerivationPtr as_head(const DerivationPtr& wf, const DerivationPtr& d, TermKind head, const char* rule,
                        const char* what) {
    if (d->type->is(head)) return d;
    Term n = nf(*d->type);
    if (!n.is(head)) throw TypeError(std::string(rule) + ": expected " + what + ", got " + show(wf, n));
    return derive::conv(d, sort_of(wf, n), fuel_);
  }

  DerivationPtr as_universe(const DerivationPtr& wf, const DerivationPtr& d, const char* rule) {
    return as_head(wf, d, TermKind::Univ, rule, "a universe");
  }
  DerivationPtr as_level(const DerivationPtr& wf, const DerivationPtr& d, const char* rule) {
    return as_head(wf, d, TermKind::LevelLt, rule, "a level type");
  }
  DerivationPtr as_pi(const DerivationPtr& wf, const DerivationPtr& d) {
    return as_head(wf, d, TermKind::Pi, "App", "a function type");
  }

  // k : Level< b  becomes  k : Level< nf(b)
  DerivationPtr normalized_bound(const DerivationPtr& wf, const DerivationPtr& d) {
    return conv_to(wf, d, Term::level_lt(nf(d->type->operand())));
  }

  // X : U k  becomes  X : U target
  DerivationPtr lift(const DerivationPtr& wf, const DerivationPtr& d, const Term& target) {
    const Term& k = d->type->operand();
    if (alpha_equal(k, target)) return d;
    Term goal = Term::univ(target);
    switch (convertible(*d->type, goal, fuel_)) {
      case Convertibility::Yes: return derive::conv(d, sort_of(wf, goal), fuel_);
      case Convertibility::Undecided: throw FuelExhausted("conversion of universe levels");
      case Convertibility::No: break;
    }
    if (DerivationPtr lt = level_lt(wf, k, target)) return derive::cumul(d, lt);
    Term kn = nf(k);
    if (!alpha_equal(kn, k)) {
      if (DerivationPtr lt = level_lt(wf, kn, target)) {
        return derive::cumul(derive::conv(d, sort_of(wf, Term::univ(kn)), fuel_), lt);
      }
    }
    throw TypeError("Cumul: " + show(wf, k) + " < " + show(wf, target) + " is not derivable");
  }

  // Normal forms of the bounds above k, nearest first.
  std::vector<Term> bound_chain(const DerivationPtr& wf, const Term& k) {
    std::vector<Term> chain;
    Term n = nf(k);
    chain.push_back(n);
    std::unordered_set<Term, TermHash> visited;
    while (!n.is(TermKind::Lvl) && visited.insert(n).second) {
      try {
        n = nf(as_level(wf, infer(wf, n), "Pi")->type->operand());
      } catch (const TypeError&) {
        break;
      }
      chain.push_back(n);
    }
    return chain;
  }

  DerivationPtr infer_pi(const DerivationPtr& wf, const Term& dom, const Term& cod) {
    DerivationPtr dom_sort = as_universe(wf, infer(wf, dom), "Pi");
    DerivationPtr inner = derive::cons(wf, dom_sort);
    DerivationPtr cod_sort = as_universe(inner, infer(inner, cod), "Pi");
    const Term& k1 = dom_sort->type->operand();
    const Term& k2 = cod_sort->type->operand();

    std::vector<Term> candidates;
    auto add = [&](const Term& c) {
      for (const Term& seen : candidates) {
        if (alpha_equal(seen, c)) return;
      }
      candidates.push_back(c);
    };
    add(k1);
    if (auto k2_out = unshift(k2, 1)) add(*k2_out);
    for (const Term& c : bound_chain(wf, k1)) add(c);
    for (const Term& c : bound_chain(inner, k2)) {
      if (auto out = unshift(c, 1)) add(*out);
    }
    for (const Term& c : candidates) {
      try {
        DerivationPtr a = lift(wf, dom_sort, c);
        DerivationPtr b = lift(inner, cod_sort, shift(c, 1));
        return derive::pi(a, b);
      } catch (const TypeError&) {
      }
    }
    throw TypeError("Pi: no common universe for " + show(wf, Term::univ(k1)) + " and " +
                    show(inner, Term::univ(k2)));
  }

  DerivationPtr check_lam(const DerivationPtr& wf, const Term& a, const Term& type) {
    auto pi = head_form(type, TermKind::Pi);
    if (!pi) throw TypeError("Lam: expected type " + show(wf, type) + " is not a function type");
    const Term& ann = a.ann();
    if (!alpha_equal(ann, pi->dom())) {
      switch (convertible(ann, pi->dom(), fuel_)) {
        case Convertibility::Yes: break;
        case Convertibility::Undecided: throw FuelExhausted("conversion of a lambda annotation");
        case Convertibility::No:
          throw TypeError("Lam: annotation " + show(wf, ann) + " does not match domain " + show(wf, pi->dom()));
      }
    }
    DerivationPtr dom = as_universe(wf, infer(wf, ann), "Lam");
    DerivationPtr body = check(derive::cons(wf, dom), a.body(), pi->cod());
    DerivationPtr pi_sort = infer_pi(wf, ann, pi->cod());
    return conv_to(wf, derive::lam(pi_sort->premises[0], pi_sort, body), type);
  }

  DerivationPtr check_by_subsumption(const DerivationPtr& wf, const Term& a, const Term& type) {
    DerivationPtr d = infer(wf, a);
    const Term& actual = *d->type;
    if (alpha_equal(actual, type)) return d;
    switch (convertible(actual, type, fuel_)) {
      case Convertibility::Yes: return derive::conv(d, sort_of(wf, type), fuel_);
      case Convertibility::Undecided: throw FuelExhausted("conversion of " + show(wf, actual) + " and " + show(wf, type));
      case Convertibility::No: break;
    }
    Term actual_nf = nf(actual);
    Term expected_nf = nf(type);
    if (actual_nf.is(TermKind::Univ) && expected_nf.is(TermKind::Univ)) {
      DerivationPtr lifted = lift(wf, as_universe(wf, d, "Cumul"), expected_nf.operand());
      return conv_to(wf, lifted, type);
    }
    if (actual_nf.is(TermKind::LevelLt) && expected_nf.is(TermKind::LevelLt)) {
      if (DerivationPtr lt = level_lt(wf, a, expected_nf.operand(), d)) return conv_to(wf, lt, type);
      throw TypeError("Trans: " + show(wf, a) + " < " + show(wf, expected_nf.operand()) + " is not derivable");
    }
    throw TypeError("Conv: expected " + show(wf, expected_nf) + ", got " + show(wf, actual_nf));
  }

  const LevelDomain& domain_;
  Fuel fuel_;
  const TypeChecker::Printer& printer_;
};

template <typename F>
Judgement run(F&& body) {
  Judgement j;
  try {
    j.derivation = body();
    j.verdict = Verdict::Accepted;
  } catch (const TypeError& e) {
    j.diagnostic = e.what();
  } catch (const FuelExhausted& e) {
    j.verdict = Verdict::FuelExhausted;
    j.diagnostic = std::string("fuel exhausted: ") + e.what();
  }
  return j;
}

}  // namespace

TypeChecker::TypeChecker(const LevelDomain& domain, Fuel fuel) : domain_(domain), fuel_(fuel) {}

Judgement TypeChecker::check_context(const Context& ctx) const {
  return run([&] { return Engine(domain_, fuel_, printer_).wf_context(ctx); });
}

Judgement TypeChecker::infer(const Context& ctx, const Term& a) const {
  return run([&] {
    Engine e(domain_, fuel_, printer_);
    return e.infer(e.wf_context(ctx), a);
  });
}

Judgement TypeChecker::check(const Context& ctx, const Term& a, const Term& type) const {
  return run([&] {
    Engine e(domain_, fuel_, printer_);
    DerivationPtr wf = e.wf_context(ctx);
    try {
      e.infer(wf, type);
    } catch (const TypeError& err) {
      throw TypeError(std::string("expected type is ill-formed: ") + err.what());
    }
    return e.check(wf, a, type);
  });
}

Judgement TypeChecker::level_lt_check(const Context& ctx, const Term& k, const Term& l) const {
  return run([&] {
    Engine e(domain_, fuel_, printer_);
    DerivationPtr wf = e.wf_context(ctx);
    DerivationPtr d = e.level_lt(wf, k, l);
    if (!d) throw TypeError("Trans: " + e.show(wf, k) + " < " + e.show(wf, l) + " is not derivable");
    return d;
  });
}

namespace {

// G |- A : U k  extracted from a derivation of  G |- Pi x:A.B : U k.
DerivationPtr invert_pi_domain(const DerivationPtr& d) {
  if (!d || d->is_context_judgement() || !d->term->is(TermKind::Pi)) {
    throw InversionFailure("inversion: derivation does not conclude a Pi type");
  }
  switch (d->rule) {
    case Rule::Pi:
      return d->premises.at(0);
    case Rule::Cumul:
      return derive::cumul(invert_pi_domain(d->premises.at(0)), d->premises.at(1));
    case Rule::Conv:
      return derive::conv(invert_pi_domain(d->premises.at(0)), d->premises.at(1), d->conv_fuel);
    default:
      throw InversionFailure("inversion: Pi derivation ends in rule " + std::string(rule_name(d->rule)));
  }
}

}  // namespace

DerivationPtr elaborate_lam_prime(const DerivationPtr& pi_sort, const DerivationPtr& body) {
  return derive::lam(invert_pi_domain(pi_sort), pi_sort, body);
}

}  // namespace ttbfl
