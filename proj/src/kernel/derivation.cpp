#include "ttbfl/derivation.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "ttbfl/substitution.hpp"

namespace ttbfl {

std::string_view rule_name(Rule rule) {
  switch (rule) {
    case Rule::Nil: return "Nil";
    case Rule::Cons: return "Cons";
    case Rule::Var: return "Var";
    case Rule::Pi: return "Pi";
    case Rule::Lam: return "Lam";
    case Rule::App: return "App";
    case Rule::Mty: return "Mty";
    case Rule::Abs: return "Abs";
    case Rule::Conv: return "Conv";
    case Rule::Univ: return "Univ";
    case Rule::LevelLt: return "Level<";
    case Rule::Lvl: return "Lvl";
    case Rule::Trans: return "Trans";
    case Rule::Cumul: return "Cumul";
  }
  return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
  for (Rule r : kAllRules) {
    if (rule_name(r) == name) return r;
  }
  return std::nullopt;
}

namespace derive {

namespace {

DerivationPtr node(Rule rule, Context ctx, std::optional<Term> term, std::optional<Term> type,
                   std::vector<DerivationPtr> premises) {
  auto d = std::make_shared<Derivation>();
  d->rule = rule;
  d->ctx = std::move(ctx);
  d->term = std::move(term);
  d->type = std::move(type);
  d->premises = std::move(premises);
  return d;
}

const Derivation& typing(const DerivationPtr& d, std::string_view rule) {
  if (!d || d->is_context_judgement()) {
    throw std::logic_error(std::string(rule) + ": premise is not a typing judgement");
  }
  return *d;
}

const Term& operand_of(const Term& t, TermKind kind, std::string_view rule) {
  if (!t.is(kind)) throw std::logic_error(std::string(rule) + ": premise type has the wrong head");
  return t.operand();
}

}  // namespace

DerivationPtr nil() { return node(Rule::Nil, Context(), std::nullopt, std::nullopt, {}); }

DerivationPtr cons(DerivationPtr wf, DerivationPtr sort) {
  const Derivation& s = typing(sort, "Cons");
  Context ctx = s.ctx.extend(*s.term);
  return node(Rule::Cons, std::move(ctx), std::nullopt, std::nullopt, {std::move(wf), std::move(sort)});
}

DerivationPtr var(DerivationPtr wf, std::size_t index) {
  Context ctx = wf->ctx;
  Term type = ctx.lookup(index);
  return node(Rule::Var, std::move(ctx), Term::var(index), std::move(type), {std::move(wf)});
}

DerivationPtr pi(DerivationPtr dom_sort, DerivationPtr cod_sort) {
  const Derivation& a = typing(dom_sort, "Pi");
  const Derivation& b = typing(cod_sort, "Pi");
  return node(Rule::Pi, a.ctx, Term::pi(*a.term, *b.term), *a.type, {std::move(dom_sort), std::move(cod_sort)});
}

DerivationPtr lam(DerivationPtr dom_sort, DerivationPtr pi_sort, DerivationPtr body) {
  const Derivation& a = typing(dom_sort, "Lam");
  const Derivation& p = typing(pi_sort, "Lam");
  const Derivation& b = typing(body, "Lam");
  return node(Rule::Lam, a.ctx, Term::lam(*a.term, *b.term), *p.term,
              {std::move(dom_sort), std::move(pi_sort), std::move(body)});
}

DerivationPtr app(DerivationPtr fun, DerivationPtr arg) {
  const Derivation& f = typing(fun, "App");
  const Derivation& a = typing(arg, "App");
  if (!f.type->is(TermKind::Pi)) throw std::logic_error("App: function type is not a Pi");
  Term type = subst1(f.type->cod(), *a.term);
  return node(Rule::App, f.ctx, Term::app(*f.term, *a.term), std::move(type), {std::move(fun), std::move(arg)});
}

DerivationPtr mty(DerivationPtr universe) {
  const Derivation& u = typing(universe, "Mty");
  return node(Rule::Mty, u.ctx, Term::mty(), *u.term, {std::move(universe)});
}

DerivationPtr abs(DerivationPtr sort, DerivationPtr proof) {
  const Derivation& s = typing(sort, "Abs");
  const Derivation& p = typing(proof, "Abs");
  return node(Rule::Abs, s.ctx, Term::absurd(*s.term, *p.term), *s.term, {std::move(sort), std::move(proof)});
}

DerivationPtr conv(DerivationPtr typing_d, DerivationPtr target_sort, Fuel fuel) {
  const Derivation& t = typing(typing_d, "Conv");
  const Derivation& s = typing(target_sort, "Conv");
  auto d = std::make_shared<Derivation>();
  d->rule = Rule::Conv;
  d->ctx = t.ctx;
  d->term = *t.term;
  d->type = *s.term;
  d->premises = {std::move(typing_d), std::move(target_sort)};
  d->conv_fuel = fuel;
  return d;
}

DerivationPtr univ(DerivationPtr level) {
  const Derivation& k = typing(level, "Univ");
  Term bound = operand_of(*k.type, TermKind::LevelLt, "Univ");
  return node(Rule::Univ, k.ctx, Term::univ(*k.term), Term::univ(bound), {std::move(level)});
}

DerivationPtr level_lt(DerivationPtr universe, DerivationPtr level) {
  const Derivation& u = typing(universe, "Level<");
  const Derivation& k = typing(level, "Level<");
  operand_of(*k.type, TermKind::LevelLt, "Level<");
  return node(Rule::LevelLt, u.ctx, Term::level_lt(*k.term), *u.term, {std::move(universe), std::move(level)});
}

DerivationPtr lvl(DerivationPtr wf, LevelValue i, LevelValue j) {
  Context ctx = wf->ctx;
  return node(Rule::Lvl, std::move(ctx), Term::lvl(i), Term::level_lt(Term::lvl(j)), {std::move(wf)});
}

DerivationPtr trans(DerivationPtr lower, DerivationPtr upper) {
  const Derivation& l = typing(lower, "Trans");
  const Derivation& u = typing(upper, "Trans");
  return node(Rule::Trans, l.ctx, *l.term, *u.type, {std::move(lower), std::move(upper)});
}

DerivationPtr cumul(DerivationPtr sort, DerivationPtr level) {
  const Derivation& s = typing(sort, "Cumul");
  const Derivation& k = typing(level, "Cumul");
  Term bound = operand_of(*k.type, TermKind::LevelLt, "Cumul");
  return node(Rule::Cumul, s.ctx, *s.term, Term::univ(bound), {std::move(sort), std::move(level)});
}

}  // namespace derive

std::string describe_judgement(const Derivation& d) {
  std::string ctx = "[";
  for (std::size_t i = 0; i < d.ctx.size(); ++i) {
    if (i) ctx += ", ";
    ctx += d.ctx.entry(i).debug();
  }
  ctx += "]";
  if (d.is_context_judgement()) return "|- " + ctx;
  return ctx + " |- " + d.term->debug() + " : " + d.type->debug();
}

namespace {

class Validator {
 public:
  explicit Validator(const LevelDomain& domain) : domain_(domain) {}

  DerivationReport run(const DerivationPtr& root) {
    visit(root);
    return report_;
  }

 private:
  void fail(const Derivation& d, const std::string& condition) {
    report_.ok = false;
    report_.diagnostics.push_back(std::string(rule_name(d.rule)) + ": " + condition + " fails at " +
                                  describe_judgement(d));
  }

  // Premise i exists and is a judgement of the requested form over `ctx`.
  const Derivation* premise(const Derivation& d, std::size_t i, bool context_judgement, const Context& ctx) {
    const Derivation& p = *d.premises[i];
    if (p.is_context_judgement() != context_judgement) {
      fail(d, "premise " + std::to_string(i + 1) + " judgement form");
      return nullptr;
    }
    if (!(p.ctx == ctx)) {
      fail(d, "premise " + std::to_string(i + 1) + " context");
      return nullptr;
    }
    return &p;
  }

  static bool has_head(const std::optional<Term>& t, TermKind kind) { return t && t->is(kind); }

  void visit(const DerivationPtr& dp) {
    if (!dp) {
      report_.ok = false;
      report_.diagnostics.push_back("missing derivation node");
      return;
    }
    if (!seen_.insert(dp.get()).second) return;
    for (const auto& p : dp->premises) visit(p);
    check_node(*dp);
  }

  bool arity(const Derivation& d, std::size_t n) {
    if (d.premises.size() != n) {
      fail(d, "premise count == " + std::to_string(n));
      return false;
    }
    for (const auto& p : d.premises) {
      if (!p) return false;
    }
    if (!d.is_context_judgement() && (!d.term || !d.type)) {
      fail(d, "conclusion present");
      return false;
    }
    return true;
  }

  void check_node(const Derivation& d) {
    const Context& ctx = d.ctx;
    switch (d.rule) {
      case Rule::Nil:
        if (!arity(d, 0)) return;
        if (!ctx.empty()) fail(d, "empty context");
        if (d.term || d.type) fail(d, "context judgement form");
        return;
      case Rule::Cons: {
        if (!arity(d, 2)) return;
        if (ctx.empty()) return fail(d, "non-empty context");
        Context prefix = ctx.prefix(ctx.size() - 1);
        premise(d, 0, true, prefix);
        const Derivation* s = premise(d, 1, false, prefix);
        if (!s) return;
        if (!alpha_equal(*s->term, ctx.entry(ctx.size() - 1))) fail(d, "premise types the new entry");
        if (!has_head(s->type, TermKind::Univ)) fail(d, "entry type is U k");
        return;
      }
      case Rule::Var: {
        if (!arity(d, 1)) return;
        premise(d, 0, true, ctx);
        if (!d.term->is(TermKind::Var) || d.term->index() >= ctx.size()) return fail(d, "x : A in context");
        if (!alpha_equal(*d.type, ctx.lookup(d.term->index()))) fail(d, "x : A in context");
        return;
      }
      case Rule::Pi: {
        if (!arity(d, 2)) return;
        if (!d.term->is(TermKind::Pi) || !has_head(d.type, TermKind::Univ)) return fail(d, "conclusion shape");
        const Term& k = d.type->operand();
        const Derivation* a = premise(d, 0, false, ctx);
        const Derivation* b = premise(d, 1, false, ctx.extend(d.term->dom()));
        if (!a || !b) return;
        if (!alpha_equal(*a->term, d.term->dom()) || !alpha_equal(*a->type, Term::univ(k))) {
          fail(d, "premise A : U k");
        }
        if (!alpha_equal(*b->term, d.term->cod()) || !alpha_equal(*b->type, Term::univ(shift(k, 1)))) {
          fail(d, "premise B : U k");
        }
        return;
      }
      case Rule::Lam: {
        if (!arity(d, 3)) return;
        if (!d.term->is(TermKind::Lam) || !has_head(d.type, TermKind::Pi)) return fail(d, "conclusion shape");
        const Term& dom = d.term->ann();
        if (!alpha_equal(d.type->dom(), dom)) return fail(d, "annotation matches the Pi domain");
        const Derivation* a = premise(d, 0, false, ctx);
        const Derivation* p = premise(d, 1, false, ctx);
        const Derivation* b = premise(d, 2, false, ctx.extend(dom));
        if (!a || !p || !b) return;
        if (!alpha_equal(*a->term, dom) || !has_head(a->type, TermKind::Univ)) return fail(d, "premise A : U k");
        if (!alpha_equal(*p->term, *d.type) || !alpha_equal(*p->type, *a->type)) {
          return fail(d, "premise Pi x:A.B : U k");
        }
        if (!alpha_equal(*b->term, d.term->body()) || !alpha_equal(*b->type, d.type->cod())) {
          fail(d, "premise b : B");
        }
        return;
      }
      case Rule::App: {
        if (!arity(d, 2)) return;
        if (!d.term->is(TermKind::App)) return fail(d, "conclusion shape");
        const Derivation* f = premise(d, 0, false, ctx);
        const Derivation* a = premise(d, 1, false, ctx);
        if (!f || !a) return;
        if (!alpha_equal(*f->term, d.term->fun()) || !has_head(f->type, TermKind::Pi)) {
          return fail(d, "premise b : Pi x:A.B");
        }
        if (!alpha_equal(*a->term, d.term->arg()) || !alpha_equal(*a->type, f->type->dom())) {
          return fail(d, "premise a : A");
        }
        if (!alpha_equal(*d.type, subst1(f->type->cod(), d.term->arg()))) fail(d, "type is B[x := a]");
        return;
      }
      case Rule::Mty: {
        if (!arity(d, 1)) return;
        if (!d.term->is(TermKind::Mty) || !has_head(d.type, TermKind::Univ)) return fail(d, "conclusion shape");
        const Derivation* u = premise(d, 0, false, ctx);
        if (!u) return;
        if (!alpha_equal(*u->term, *d.type) || !has_head(u->type, TermKind::Univ)) fail(d, "premise U k : U l");
        return;
      }
      case Rule::Abs: {
        if (!arity(d, 2)) return;
        if (!d.term->is(TermKind::Absurd)) return fail(d, "conclusion shape");
        if (!alpha_equal(*d.type, d.term->ann())) return fail(d, "type is the annotation");
        const Derivation* s = premise(d, 0, false, ctx);
        const Derivation* p = premise(d, 1, false, ctx);
        if (!s || !p) return;
        if (!alpha_equal(*s->term, d.term->ann()) || !has_head(s->type, TermKind::Univ)) {
          fail(d, "premise A : U k");
        }
        if (!alpha_equal(*p->term, d.term->scrut()) || !p->type->is(TermKind::Mty)) fail(d, "premise b : Bot");
        return;
      }
      case Rule::Conv: {
        if (!arity(d, 2)) return;
        const Derivation* t = premise(d, 0, false, ctx);
        const Derivation* s = premise(d, 1, false, ctx);
        if (!t || !s) return;
        if (!alpha_equal(*t->term, *d.term)) return fail(d, "premise a : A");
        if (!alpha_equal(*s->term, *d.type) || !has_head(s->type, TermKind::Univ)) {
          return fail(d, "premise B : U k");
        }
        switch (convertible(*t->type, *d.type, d.conv_fuel)) {
          case Convertibility::Yes: break;
          case Convertibility::No: fail(d, "A == B"); break;
          case Convertibility::Undecided:
            report_.fuel_exhausted = true;
            fail(d, "A == B (fuel exhausted)");
            break;
        }
        return;
      }
      case Rule::Univ: {
        if (!arity(d, 1)) return;
        if (!d.term->is(TermKind::Univ) || !has_head(d.type, TermKind::Univ)) return fail(d, "conclusion shape");
        const Derivation* k = premise(d, 0, false, ctx);
        if (!k) return;
        if (!alpha_equal(*k->term, d.term->operand()) ||
            !alpha_equal(*k->type, Term::level_lt(d.type->operand()))) {
          fail(d, "premise k : Level< l");
        }
        return;
      }
      case Rule::LevelLt: {
        if (!arity(d, 2)) return;
        if (!d.term->is(TermKind::LevelLt) || !has_head(d.type, TermKind::Univ)) return fail(d, "conclusion shape");
        const Derivation* u = premise(d, 0, false, ctx);
        const Derivation* k = premise(d, 1, false, ctx);
        if (!u || !k) return;
        if (!alpha_equal(*u->term, *d.type) || !has_head(u->type, TermKind::Univ)) fail(d, "premise U k1 : U l1");
        if (!alpha_equal(*k->term, d.term->operand()) || !has_head(k->type, TermKind::LevelLt)) {
          fail(d, "premise k0 : Level< l0");
        }
        return;
      }
      case Rule::Lvl: {
        if (!arity(d, 1)) return;
        premise(d, 0, true, ctx);
        if (!d.term->is(TermKind::Lvl) || !has_head(d.type, TermKind::LevelLt) ||
            !d.type->operand().is(TermKind::Lvl)) {
          return fail(d, "conclusion shape");
        }
        const LevelValue& i = d.term->level();
        const LevelValue& j = d.type->operand().level();
        if (!domain_.contains(i) || !domain_.contains(j)) return fail(d, "levels in domain");
        if (!domain_.lt(i, j)) fail(d, "i < j");
        return;
      }
      case Rule::Trans: {
        if (!arity(d, 2)) return;
        if (!has_head(d.type, TermKind::LevelLt)) return fail(d, "conclusion shape");
        const Derivation* lo = premise(d, 0, false, ctx);
        const Derivation* hi = premise(d, 1, false, ctx);
        if (!lo || !hi) return;
        if (!alpha_equal(*lo->term, *d.term) || !has_head(lo->type, TermKind::LevelLt)) {
          return fail(d, "premise k1 : Level< k2");
        }
        if (!alpha_equal(*hi->term, lo->type->operand()) || !alpha_equal(*hi->type, *d.type)) {
          fail(d, "premise k2 : Level< k3");
        }
        return;
      }
      case Rule::Cumul: {
        if (!arity(d, 2)) return;
        if (!has_head(d.type, TermKind::Univ)) return fail(d, "conclusion shape");
        const Derivation* s = premise(d, 0, false, ctx);
        const Derivation* k = premise(d, 1, false, ctx);
        if (!s || !k) return;
        if (!alpha_equal(*s->term, *d.term) || !has_head(s->type, TermKind::Univ)) return fail(d, "premise A : U k");
        if (!alpha_equal(*k->term, s->type->operand()) ||
            !alpha_equal(*k->type, Term::level_lt(d.type->operand()))) {
          fail(d, "premise k : Level< l");
        }
        return;
      }
    }
  }

  const LevelDomain& domain_;
  DerivationReport report_;
  std::unordered_set<const Derivation*> seen_;
};

}  // namespace

DerivationReport check_derivation(const DerivationPtr& d, const LevelDomain& domain) {
  return Validator(domain).run(d);
}

namespace {

void collect(const DerivationPtr& d, std::unordered_set<const Derivation*>& seen,
             const std::function<void(const Derivation&)>& f) {
  if (!d || !seen.insert(d.get()).second) return;
  f(*d);
  for (const auto& p : d->premises) collect(p, seen, f);
}

}  // namespace

std::size_t derivation_node_count(const DerivationPtr& d) {
  std::unordered_set<const Derivation*> seen;
  collect(d, seen, [](const Derivation&) {});
  return seen.size();
}

void count_rules(const DerivationPtr& d, std::map<Rule, std::size_t>& counts) {
  std::unordered_set<const Derivation*> seen;
  collect(d, seen, [&](const Derivation& n) { ++counts[n.rule]; });
}

std::size_t derivation_height(const DerivationPtr& d) {
  if (!d || d->is_context_judgement()) return 0;
  std::size_t h = 0;
  for (const auto& p : d->premises) h = std::max(h, derivation_height(p));
  return h + 1;
}

namespace {

class Weakener {
 public:
  explicit Weakener(DerivationPtr wf) : wf_(std::move(wf)), base_(wf_->ctx.size() - 1) {}

  DerivationPtr run(const DerivationPtr& d) {
    auto it = memo_.find(d.get());
    if (it != memo_.end()) return it->second;
    DerivationPtr out = rebuild(*d);
    memo_.emplace(d.get(), out);
    return out;
  }

 private:
  Context weaken_context(const Context& ctx) {
    std::vector<Term> entries = wf_->ctx.entries();
    for (std::size_t i = base_; i < ctx.size(); ++i) entries.push_back(shift(ctx.entry(i), 1, i - base_));
    return Context(std::move(entries));
  }

  DerivationPtr rebuild(const Derivation& d) {
    if (d.ctx.size() < base_) throw std::logic_error("weaken: derivation is not over the weakened context");
    if (d.is_context_judgement() && d.ctx.size() == base_) return wf_;
    std::size_t cutoff = d.ctx.size() - base_;
    auto out = std::make_shared<Derivation>();
    out->rule = d.rule;
    out->ctx = weaken_context(d.ctx);
    if (d.term) out->term = shift(*d.term, 1, cutoff);
    if (d.type) out->type = shift(*d.type, 1, cutoff);
    out->conv_fuel = d.conv_fuel;
    for (const auto& p : d.premises) out->premises.push_back(run(p));
    return out;
  }

  DerivationPtr wf_;
  std::size_t base_;
  std::unordered_map<const Derivation*, DerivationPtr> memo_;
};

}  // namespace

DerivationPtr weaken(const DerivationPtr& d, const DerivationPtr& wf) {
  if (!wf->is_context_judgement() || wf->ctx.empty()) throw std::logic_error("weaken: bad context derivation");
  return Weakener(wf).run(d);
}

}  // namespace ttbfl
