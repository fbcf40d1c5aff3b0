#include "ttbfl/harness/generator.hpp"

#include <functional>
#include <vector>

#include "ttbfl/substitution.hpp"
#include "ttbfl/typing.hpp"

namespace ttbfl::harness {

std::uint64_t case_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 over (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

using D = DerivationPtr;

struct GenTimeout {};

constexpr std::size_t kMaxSteps = 4000;
constexpr int kAttempts = 24;

class Gen {
 public:
  Gen(const GenConfig& cfg, std::uint64_t seed) : cfg_(cfg), dom_(*cfg.domain), rng_(seed) {}

  // Keeps the largest case among attempts, stopping once a size target is met.
  std::optional<Case> run(CaseShape shape) {
    std::size_t target = cfg_.max_size / 3 + pick(cfg_.max_size * 2 / 3 + 1);
    std::optional<Case> best;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
      steps_ = 0;
      try {
        auto c = attempt_case(shape);
        if (c && (!best || c->term.size() > best->term.size())) best = std::move(c);
      } catch (const GenTimeout&) {
      }
      if (best && best->term.size() >= target) break;
    }
    return best;
  }

 private:
  struct Option {
    int weight;
    std::function<D()> run;
  };

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  void tick() {
    if (++steps_ > kMaxSteps) throw GenTimeout{};
  }

  // Tries options in weighted random order until one produces a derivation.
  D first_of(std::vector<Option> options) {
    while (!options.empty()) {
      int total = 0;
      for (const auto& o : options) total += o.weight;
      int r = static_cast<int>(pick(static_cast<std::size_t>(total)));
      std::size_t i = 0;
      while (r >= options[i].weight) r -= options[i++].weight;
      if (D d = options[i].run()) return d;
      options.erase(options.begin() + static_cast<std::ptrdiff_t>(i));
    }
    return nullptr;
  }

  bool has_omega() const { return dom_.contains(LevelValue::omega_plus(0)); }

  LevelValue small_level() {
    if (has_omega() && chance(0.2)) return LevelValue::omega_plus(pick(2));
    return LevelValue::finite(pick(4));
  }

  template <typename Pred>
  std::vector<std::size_t> vars_where(const D& wf, Pred pred) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < wf->ctx.size(); ++i) {
      if (pred(wf->ctx.lookup(i))) out.push_back(i);
    }
    return out;
  }

  std::optional<std::size_t> bot_var(const D& wf) {
    auto v = vars_where(wf, [](const Term& t) { return t.is(TermKind::Mty); });
    if (v.empty()) return std::nullopt;
    return v[pick(v.size())];
  }

  // Some typing c : Level< l for a concrete or variable level c.
  D derive_level(const D& wf, const Term& c) {
    if (c.is(TermKind::Lvl)) {
      try {
        return derive::lvl(wf, c.level(), dom_.next_above(c.level()));
      } catch (const std::overflow_error&) {
        return nullptr;
      }
    }
    if (c.is(TermKind::Var) && wf->ctx.lookup(c.index()).is(TermKind::LevelLt)) return derive::var(wf, c.index());
    return nullptr;
  }

  D bottom_universe(const D& wf) {
    LevelValue b = dom_.bottom();
    return derive::univ(derive::lvl(wf, b, dom_.next_above(b)));
  }

  D any_level(const D& wf) {
    auto level_vars = vars_where(wf, [](const Term& t) { return t.is(TermKind::LevelLt); });
    std::vector<Option> options;
    options.push_back({3, [&]() -> D {
                         LevelValue i = small_level();
                         LevelValue j = dom_.next_above(i);
                         if (chance(0.3)) j = dom_.next_above(j);
                         return derive::lvl(wf, i, j);
                       }});
    if (!level_vars.empty()) {
      options.push_back({2, [&] { return derive::var(wf, level_vars[pick(level_vars.size())]); }});
    }
    return first_of(std::move(options));
  }

  // k : Level< c
  D level_below(const D& wf, const Term& c, std::size_t budget) {
    tick();
    std::vector<Option> options;
    if (c.is(TermKind::Lvl)) {
      options.push_back({3, [&]() -> D {
                           auto below = dom_.some_below(c.level(), pick(4));
                           if (!below) return nullptr;
                           return derive::lvl(wf, *below, c.level());
                         }});
    }
    Term bound = Term::level_lt(c);
    auto direct = vars_where(wf, [&](const Term& t) { return alpha_equal(t, bound); });
    if (!direct.empty()) options.push_back({3, [&] { return derive::var(wf, direct[pick(direct.size())]); }});
    if (budget >= 2) {
      options.push_back({4, [&]() -> D {
                           D upper = level_below(wf, c, budget / 2);
                           if (!upper) return nullptr;
                           D lower = level_below(wf, *upper->term, budget / 2);
                           if (!lower) return nullptr;
                           return derive::trans(lower, upper);
                         }});
    }
    D dc = derive_level(wf, c);
    if (dc) {
      if (auto x = bot_var(wf)) {
        options.push_back({1, [&, x] {
                             return derive::abs(derive::level_lt(bottom_universe(wf), dc), derive::var(wf, *x));
                           }});
      }
      if (budget >= 5) {
        options.push_back({1, [&] { return wrap(wf, bound, derive::level_lt(bottom_universe(wf), dc), budget); }});
      }
    }
    return first_of(std::move(options));
  }

  // A : U c, where dc (nullable) types c.
  D type_at(const D& wf, const Term& c, const D& dc, std::size_t budget) {
    tick();
    std::vector<Option> options;
    if (dc) {
      options.push_back({2, [&] { return derive::mty(derive::univ(dc)); }});
      options.push_back({3, [&]() -> D {
                           D k = any_level(wf);
                           return k ? derive::level_lt(derive::univ(dc), k) : nullptr;
                         }});
    }
    options.push_back({3, [&]() -> D {
                         D j = level_below(wf, c, budget > 0 ? budget - 1 : 0);
                         return j ? derive::univ(j) : nullptr;
                       }});
    if (budget >= 3) {
      options.push_back({3, [&]() -> D {
                           D dom = type_at(wf, c, dc, budget / 2);
                           if (!dom) return nullptr;
                           D inner = derive::cons(wf, dom);
                           D dc_inner = dc ? weaken(dc, inner) : nullptr;
                           D cod = type_at(inner, shift(c, 1), dc_inner, budget / 2);
                           return cod ? derive::pi(dom, cod) : nullptr;
                         }});
    }
    auto type_vars = vars_where(wf, [](const Term& t) { return t.is(TermKind::Univ); });
    if (!type_vars.empty()) {
      options.push_back({4, [&]() -> D {
                           std::size_t x = type_vars[pick(type_vars.size())];
                           D v = derive::var(wf, x);
                           const Term& k = v->type->operand();
                           if (alpha_equal(k, c)) return v;
                           if (k.is(TermKind::Lvl) && c.is(TermKind::Lvl) && dom_.lt(k.level(), c.level())) {
                             return derive::cumul(v, derive::lvl(wf, k.level(), c.level()));
                           }
                           if (k.is(TermKind::Var) && alpha_equal(wf->ctx.lookup(k.index()), Term::level_lt(c))) {
                             return derive::cumul(v, derive::var(wf, k.index()));
                           }
                           return nullptr;
                         }});
    }
    if (budget >= 2) {
      options.push_back({4, [&]() -> D {
                           D k = level_below(wf, c, budget / 2);
                           if (!k) return nullptr;
                           D a = type_at(wf, *k->term, k, budget - 1);
                           return a ? derive::cumul(a, k) : nullptr;
                         }});
    }
    if (dc && budget >= 6) {
      options.push_back({1, [&] { return wrap(wf, Term::univ(c), derive::univ(dc), budget); }});
      options.push_back({1, [&] { return conv_round_trip(wf, Term::univ(c), derive::univ(dc), budget); }});
    }
    return first_of(std::move(options));
  }

  // Domain and codomain sorts of a derivation of Pi x:A.B : U k.
  static std::optional<std::pair<D, D>> invert_pi(D st) {
    while (st->rule == Rule::Cumul || st->rule == Rule::Conv) st = st->premises[0];
    if (st->rule != Rule::Pi) return std::nullopt;
    return std::make_pair(st->premises[0], st->premises[1]);
  }

  // t : T, where st : T : U m.
  D term_of(const D& wf, const Term& type, const D& st, std::size_t budget) {
    tick();
    std::vector<Option> options;
    if (type.is(TermKind::Univ)) {
      const Term& c = type.operand();
      D dc = st->rule == Rule::Univ ? st->premises[0] : derive_level(wf, c);
      options.push_back({6, [&, dc] { return type_at(wf, c, dc, budget); }});
    }
    if (type.is(TermKind::LevelLt)) {
      options.push_back({6, [&] { return level_below(wf, type.operand(), budget); }});
    }
    if (type.is(TermKind::Pi) && budget >= 2) {
      options.push_back({6, [&]() -> D {
                           auto sorts = invert_pi(st);
                           if (!sorts) return nullptr;
                           D inner = derive::cons(wf, sorts->first);
                           D body = term_of(inner, type.cod(), sorts->second, budget - 1);
                           return body ? elaborate_lam_prime(st, body) : nullptr;
                         }});
    }
    auto typed = vars_where(wf, [&](const Term& t) { return alpha_equal(t, type); });
    if (!typed.empty()) options.push_back({3, [&] { return derive::var(wf, typed[pick(typed.size())]); }});
    if (auto x = bot_var(wf)) {
      options.push_back({1, [&, x] { return derive::abs(st, derive::var(wf, *x)); }});
    }
    if (budget >= 6) {
      options.push_back({2, [&] { return wrap(wf, type, st, budget); }});
      options.push_back({2, [&] { return conv_round_trip(wf, type, st, budget); }});
    }
    return first_of(std::move(options));
  }

  // (fun x : A . b) a : T with b : T weakened.
  D wrap(const D& wf, const Term& type, const D& st, std::size_t budget) {
    const Term& m = st->type->operand();
    D dom = type_at(wf, m, derive_level(wf, m), budget / 3);
    if (!dom) return nullptr;
    D arg = term_of(wf, *dom->term, dom, budget / 3);
    if (!arg) return nullptr;
    D inner = derive::cons(wf, dom);
    D st_inner = weaken(st, inner);
    D body = term_of(inner, shift(type, 1), st_inner, budget / 3);
    if (!body) return nullptr;
    D pi = derive::pi(dom, st_inner);
    return derive::app(derive::lam(dom, pi, body), arg);
  }

  // T' = (fun _ : B . T) b, typed at the universe of T; st : T : U m.
  D expansion(const D& wf, const D& st, std::size_t budget) {
    const Term& m = st->type->operand();
    D dm = derive_level(wf, m);
    if (!dm) return nullptr;
    const Term& l = dm->type->operand();
    D b_sort = type_at(wf, l, derive_level(wf, l), budget / 4);
    if (!b_sort) return nullptr;
    D b = term_of(wf, *b_sort->term, b_sort, budget / 4);
    if (!b) return nullptr;
    D inner = derive::cons(wf, b_sort);
    D pi = derive::pi(b_sort, weaken(derive::univ(dm), inner));
    D lam = derive::lam(b_sort, pi, weaken(st, inner));
    return derive::app(lam, b);
  }

  D conv_round_trip(const D& wf, const Term& type, const D& st, std::size_t budget) {
    D expanded = expansion(wf, st, budget);
    if (!expanded) return nullptr;
    D d = term_of(wf, type, st, budget / 2);
    if (!d) return nullptr;
    return derive::conv(derive::conv(d, expanded, cfg_.fuel), st, cfg_.fuel);
  }

  D context(std::size_t n, bool allow_bot) {
    D wf = derive::nil();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Option> options;
      options.push_back({4, [&]() -> D {
                           D c = any_level(wf);
                           return c ? derive::level_lt(bottom_universe(wf), c) : nullptr;
                         }});
      options.push_back({3, [&]() -> D {
                           D c = any_level(wf);
                           return c ? derive::univ(c) : nullptr;
                         }});
      if (allow_bot) options.push_back({2, [&] { return derive::mty(bottom_universe(wf)); }});
      auto type_vars = vars_where(wf, [](const Term& t) { return t.is(TermKind::Univ); });
      if (!type_vars.empty()) {
        options.push_back({3, [&] { return derive::var(wf, type_vars[pick(type_vars.size())]); }});
      }
      options.push_back({2, [&]() -> D {
                           D c = any_level(wf);
                           return c ? type_at(wf, *c->term, c, 6) : nullptr;
                         }});
      D sort = first_of(std::move(options));
      if (!sort) return nullptr;
      wf = derive::cons(wf, sort);
    }
    return wf;
  }

  std::optional<Case> attempt_case(CaseShape shape) {
    D wf = derive::nil();
    if (shape == CaseShape::Any) {
      wf = context(pick(cfg_.max_context + 1), chance(0.35));
      if (!wf) return std::nullopt;
    }
    std::size_t budget = cfg_.max_size;
    std::vector<Option> goals;
    bool sort_or_level = shape == CaseShape::ClosedSortOrLevel;
    if (!sort_or_level) {
      goals.push_back({4, [&]() -> D {
                         D c = any_level(wf);
                         D a = c ? type_at(wf, *c->term, c, budget / 3) : nullptr;
                         return a ? term_of(wf, *a->term, a, budget) : nullptr;
                       }});
    }
    goals.push_back({2, [&]() -> D {
                       D c = any_level(wf);
                       return c ? level_below(wf, *c->term, budget) : nullptr;
                     }});
    goals.push_back({2, [&]() -> D {
                       D c = any_level(wf);
                       return c ? type_at(wf, *c->term, c, budget) : nullptr;
                     }});
    D d = first_of(std::move(goals));
    if (!d) return std::nullopt;
    if (!sort_or_level && chance(0.2)) {
      D st = type_sort(wf, d);
      if (D expanded = st ? expansion(wf, st, budget) : nullptr) d = derive::conv(d, expanded, cfg_.fuel);
    }
    return Case{0, d->ctx, *d->term, *d->type, d};
  }

  // A sort derivation for the type of d, for the shapes produced above.
  D type_sort(const D& wf, const D& d) {
    TypeChecker tc(dom_, cfg_.fuel);
    Judgement j = tc.infer(wf->ctx, *d->type);
    if (!j.accepted() || !j.type().is(TermKind::Univ)) return nullptr;
    return j.derivation;
  }

  const GenConfig& cfg_;
  const LevelDomain& dom_;
  std::mt19937_64 rng_;
  std::size_t steps_ = 0;
};

}  // namespace

std::optional<Case> generate_case(const GenConfig& cfg, std::size_t index, CaseShape shape) {
  Gen gen(cfg, case_seed(cfg.seed, index));
  auto c = gen.run(shape);
  if (c) c->index = index;
  return c;
}

Term random_term(std::mt19937_64& rng, std::size_t size, std::size_t free_vars) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::function<Term(std::size_t, std::size_t)> leaf = [&](std::size_t, std::size_t depth) -> Term {
    std::size_t r = pick(depth > 0 ? 5 : 3);
    if (r == 0) return Term::mty();
    if (r == 1) return Term::lvl(LevelValue::finite(pick(3)));
    if (r == 2) return Term::lvl(LevelValue::omega_plus(pick(2)));
    return Term::var(pick(depth));
  };
  std::function<Term(std::size_t, std::size_t)> gen = [&](std::size_t n, std::size_t depth) -> Term {
    if (n <= 1) return leaf(1, depth);
    std::size_t rest = n - 1;
    auto split = [&](std::size_t total) { return total <= 1 ? std::size_t{1} : 1 + pick(total - 1); };
    switch (pick(8)) {
      case 0: return Term::univ(gen(rest, depth));
      case 1: return Term::level_lt(gen(rest, depth));
      case 2:
      case 3: {
        if (rest < 2) return Term::lam(leaf(1, depth), leaf(1, depth + 1));
        std::size_t l = split(rest);
        return Term::lam(gen(l, depth), gen(rest - l > 0 ? rest - l : 1, depth + 1));
      }
      case 4: {
        if (rest < 2) return Term::pi(leaf(1, depth), leaf(1, depth + 1));
        std::size_t l = split(rest);
        return Term::pi(gen(l, depth), gen(rest - l > 0 ? rest - l : 1, depth + 1));
      }
      case 5:
      case 6: {
        // Redex: (fun _ : A . b) a
        if (rest < 4) return Term::app(leaf(1, depth), leaf(1, depth));
        std::size_t b = split(rest - 2);
        std::size_t a = rest - 2 - b > 0 ? rest - 2 - b : 1;
        return Term::app(Term::lam(leaf(1, depth), gen(b, depth + 1)), gen(a, depth));
      }
      default: {
        if (rest < 2) return Term::absurd(leaf(1, depth), leaf(1, depth));
        std::size_t l = split(rest);
        return pick(2) ? Term::app(gen(l, depth), gen(rest - l > 0 ? rest - l : 1, depth))
                       : Term::absurd(gen(l, depth), gen(rest - l > 0 ? rest - l : 1, depth));
      }
    }
  };
  return gen(size, free_vars);
}

}  // namespace ttbfl::harness
