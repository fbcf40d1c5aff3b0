#include "ttbfl/harness/search.hpp"

#include <functional>
#include <unordered_map>

#include "ttbfl/substitution.hpp"
#include "ttbfl/typing.hpp"

namespace ttbfl::harness {

namespace {

using D = DerivationPtr;

void add_unique(std::vector<Term>& pool, const Term& t) {
  for (const Term& p : pool) {
    if (alpha_equal(p, t)) return;
  }
  pool.push_back(t);
}

// Subterms of t usable at the scope of t itself.
void closed_subterms(const Term& t, std::size_t depth, std::vector<Term>& out) {
  if (depth == 0) {
    add_unique(out, t);
  } else if (auto lowered = unshift(t, depth)) {
    add_unique(out, *lowered);
  }
  for (std::size_t i = 0; i < t.arity(); ++i) closed_subterms(t.child(i), depth + (t.binds(i) ? 1 : 0), out);
}

class Search {
 public:
  Search(const SearchConfig& cfg, const Context& root) : cfg_(cfg), dom_(*cfg.domain), root_size_(root.size()) {}

  void build_pool(const Context& ctx, const Term& a, const Term& type) {
    std::vector<Term> base;
    closed_subterms(a, 0, base);
    closed_subterms(type, 0, base);
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      closed_subterms(ctx.lookup(i), 0, base);
      add_unique(base, Term::var(i));
    }
    for (std::uint64_t n = 0; n < 3; ++n) add_unique(base, Term::lvl(LevelValue::finite(n)));
    if (dom_.contains(LevelValue::omega_plus(0))) add_unique(base, Term::lvl(LevelValue::omega_plus(0)));
    pool_ = base;
    std::vector<std::size_t> bots;
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (ctx.lookup(i).is(TermKind::Mty)) bots.push_back(i);
    }
    for (const Term& p : base) {
      add_unique(pool_, Term::univ(p));
      add_unique(pool_, Term::level_lt(p));
      for (std::size_t x : bots) {
        add_unique(pool_, Term::absurd(Term::level_lt(p), Term::var(x)));
        add_unique(pool_, Term::absurd(Term::univ(p), Term::var(x)));
      }
    }
  }

  std::size_t pool_size() const { return pool_.size(); }
  std::size_t goals() const { return memo_.size(); }

  // Derivation of height <= depth, or null.
  D prove(const D& wf, const Term& a, const Term& type, std::size_t depth) {
    if (depth == 0) return nullptr;
    std::string key = key_of(wf->ctx, a, type);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      if (it->second.found && it->second.height <= depth) return it->second.found;
      if (!it->second.found && it->second.failed_at >= depth) return nullptr;
    }
    D d = attempt(wf, a, type, depth);
    Memo& m = memo_[key];
    if (d) {
      m.found = d;
      m.height = depth;
    } else {
      m.failed_at = std::max(m.failed_at, depth);
    }
    return d;
  }

 private:
  struct Memo {
    D found;
    std::size_t height = 0;
    std::size_t failed_at = 0;
  };

  static std::string key_of(const Context& ctx, const Term& a, const Term& type) {
    std::string key;
    for (const Term& e : ctx.entries()) key += e.debug() + ";";
    return key + "|" + a.debug() + "|" + type.debug();
  }

  std::vector<Term> pool_at(std::size_t scope) const {
    std::vector<Term> out;
    for (const Term& p : pool_) add_unique(out, shift(p, scope - root_size_));
    for (std::size_t i = 0; i < scope - root_size_; ++i) add_unique(out, Term::var(i));
    return out;
  }

  D attempt(const D& wf, const Term& a, const Term& type, std::size_t depth) {
    const Context& ctx = wf->ctx;
    std::size_t n = depth - 1;
    std::vector<Term> pool = pool_at(ctx.size());

    switch (a.kind()) {
      case TermKind::Var:
        if (a.index() < ctx.size() && alpha_equal(ctx.lookup(a.index()), type)) return derive::var(wf, a.index());
        break;
      case TermKind::Lvl:
        if (type.is(TermKind::LevelLt) && type.operand().is(TermKind::Lvl) && dom_.contains(a.level()) &&
            dom_.contains(type.operand().level()) && dom_.lt(a.level(), type.operand().level())) {
          return derive::lvl(wf, a.level(), type.operand().level());
        }
        break;
      case TermKind::Pi:
        if (type.is(TermKind::Univ) && n > 0) {
          if (D dom = prove(wf, a.dom(), type, n)) {
            D inner = derive::cons(wf, dom);
            if (D cod = prove(inner, a.cod(), shift(type, 1), n)) return derive::pi(dom, cod);
          }
        }
        break;
      case TermKind::Lam:
        if (type.is(TermKind::Pi) && alpha_equal(type.dom(), a.ann()) && n > 0) {
          for (const Term& k : pool) {
            D dom = prove(wf, a.ann(), Term::univ(k), n);
            if (!dom) continue;
            D pi = prove(wf, type, Term::univ(k), n);
            if (!pi) continue;
            if (D body = prove(derive::cons(wf, dom), a.body(), type.cod(), n)) return derive::lam(dom, pi, body);
          }
        }
        break;
      case TermKind::App:
        if (n > 0) {
          std::vector<Term> cods;
          Term arg = a.arg();
          add_unique(cods, shift(type, 1));
          add_unique(cods, abstract(type, arg));
          for (const Term& c : pool_at(ctx.size() + 1)) {
            if (alpha_equal(subst1(c, arg), type)) add_unique(cods, c);
          }
          for (const Term& dom : pool) {
            for (const Term& cod : cods) {
              if (!alpha_equal(subst1(cod, arg), type)) continue;
              D f = prove(wf, a.fun(), Term::pi(dom, cod), n);
              if (!f) continue;
              if (D x = prove(wf, arg, dom, n)) return derive::app(f, x);
            }
          }
        }
        break;
      case TermKind::Mty:
        if (type.is(TermKind::Univ) && n > 0) {
          for (const Term& l : pool) {
            if (D u = prove(wf, type, Term::univ(l), n)) return derive::mty(u);
          }
        }
        break;
      case TermKind::Absurd:
        if (alpha_equal(type, a.ann()) && n > 0) {
          if (D proof = prove(wf, a.scrut(), Term::mty(), n)) {
            for (const Term& k : pool) {
              if (D sort = prove(wf, a.ann(), Term::univ(k), n)) return derive::abs(sort, proof);
            }
          }
        }
        break;
      case TermKind::Univ:
        if (type.is(TermKind::Univ) && n > 0) {
          if (D k = prove(wf, a.operand(), Term::level_lt(type.operand()), n)) return derive::univ(k);
        }
        break;
      case TermKind::LevelLt:
        if (type.is(TermKind::Univ) && n > 0) {
          for (const Term& l1 : pool) {
            D u = prove(wf, type, Term::univ(l1), n);
            if (!u) continue;
            for (const Term& l0 : pool) {
              if (D k = prove(wf, a.operand(), Term::level_lt(l0), n)) return derive::level_lt(u, k);
            }
            break;
          }
        }
        break;
    }
    if (n == 0) return nullptr;

    if (type.is(TermKind::LevelLt)) {
      for (const Term& j : pool) {
        D hi = prove(wf, j, type, n);
        if (!hi) continue;
        if (D lo = prove(wf, a, Term::level_lt(j), n)) return derive::trans(lo, hi);
      }
    }
    if (type.is(TermKind::Univ)) {
      for (const Term& j : pool) {
        D k = prove(wf, j, Term::level_lt(type.operand()), n);
        if (!k) continue;
        if (D s = prove(wf, a, Term::univ(j), n)) return derive::cumul(s, k);
      }
    }
    for (const Term& other : pool) {
      if (alpha_equal(other, type) || convertible(other, type, cfg_.fuel) != Convertibility::Yes) continue;
      D t = prove(wf, a, other, n);
      if (!t) continue;
      for (const Term& k : pool) {
        if (D sort = prove(wf, type, Term::univ(k), n)) return derive::conv(t, sort, cfg_.fuel);
      }
    }
    return nullptr;
  }

  const SearchConfig& cfg_;
  const LevelDomain& dom_;
  std::size_t root_size_;
  std::vector<Term> pool_;
  std::unordered_map<std::string, Memo> memo_;
};

}  // namespace

SearchResult search_derivation(const Context& ctx, const Term& a, const Term& type, const SearchConfig& cfg) {
  SearchResult result;
  TypeChecker tc(*cfg.domain, cfg.fuel);
  Judgement wf = tc.check_context(ctx);
  result.context_ok = wf.accepted();
  if (!wf.accepted()) return result;
  Search search(cfg, ctx);
  search.build_pool(ctx, a, type);
  result.pool_size = search.pool_size();
  result.derivation = search.prove(wf.derivation, a, type, cfg.max_depth);
  result.goals = search.goals();
  return result;
}

}  // namespace ttbfl::harness
