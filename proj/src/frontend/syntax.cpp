#include <algorithm>

#include "ttbfl/frontend/syntax.hpp"

namespace ttbfl::frontend {

Term resolve(const SurfacePtr& s, const std::vector<std::string>& scope, const std::map<std::string, Term>& globals) {
  switch (s->kind) {
    case TermKind::Var: {
      for (std::size_t i = scope.size(); i-- > 0;) {
        if (scope[i] == s->name) return Term::var(scope.size() - 1 - i);
      }
      auto g = globals.find(s->name);
      if (g != globals.end()) return g->second;
      throw SyntaxError(s->pos, "unbound identifier '" + s->name + "'");
    }
    case TermKind::Lvl: return Term::lvl(s->level);
    case TermKind::Mty: return Term::mty();
    case TermKind::Univ: return Term::univ(resolve(s->a, scope, globals));
    case TermKind::LevelLt: return Term::level_lt(resolve(s->a, scope, globals));
    case TermKind::App: return Term::app(resolve(s->a, scope, globals), resolve(s->b, scope, globals));
    case TermKind::Absurd: return Term::absurd(resolve(s->a, scope, globals), resolve(s->b, scope, globals));
    case TermKind::Pi:
    case TermKind::Lam: {
      Term a = resolve(s->a, scope, globals);
      auto inner = scope;
      inner.push_back(s->name);
      Term b = resolve(s->b, inner, globals);
      return s->kind == TermKind::Pi ? Term::pi(a, b) : Term::lam(a, b);
    }
  }
  throw SyntaxError(s->pos, "unknown surface node");
}

namespace {

const char* hint_for(const Term& type) {
  switch (type.kind()) {
    case TermKind::Univ: return "A";
    case TermKind::LevelLt: return "i";
    case TermKind::Pi: return "f";
    default: return "x";
  }
}

std::string fresh(const std::vector<std::string>& scope, const std::string& hint) {
  static const std::map<std::string, std::vector<std::string>> kSeries = {
      {"A", {"A", "B", "C", "D", "E"}},
      {"i", {"i", "j", "k", "l"}},
      {"f", {"f", "g", "h"}},
      {"x", {"x", "y", "z", "w"}},
  };
  auto taken = [&](const std::string& n) {
    return is_keyword(n) || std::find(scope.begin(), scope.end(), n) != scope.end();
  };
  const auto& series = kSeries.at(hint);
  for (const auto& n : series) {
    if (!taken(n)) return n;
  }
  for (std::size_t k = 1;; ++k) {
    for (const auto& base : series) {
      std::string n = base + std::to_string(k);
      if (!taken(n)) return n;
    }
  }
}

}  // namespace

std::vector<std::string> name_context(const Context& ctx) {
  std::vector<std::string> names;
  for (const Term& entry : ctx.entries()) names.push_back(fresh(names, hint_for(entry)));
  return names;
}

SurfacePtr to_surface(const Term& t, const std::vector<std::string>& scope) {
  switch (t.kind()) {
    case TermKind::Var:
      if (t.index() >= scope.size()) return surface::var("#" + std::to_string(t.index() - scope.size()));
      return surface::var(scope[scope.size() - 1 - t.index()]);
    case TermKind::Lvl: return surface::lvl(t.level());
    case TermKind::Mty: return surface::bot();
    case TermKind::Univ: return surface::univ(to_surface(t.operand(), scope));
    case TermKind::LevelLt: return surface::level_lt(to_surface(t.operand(), scope));
    case TermKind::App: return surface::app(to_surface(t.fun(), scope), to_surface(t.arg(), scope));
    case TermKind::Absurd: return surface::absurd(to_surface(t.ann(), scope), to_surface(t.scrut(), scope));
    case TermKind::Pi:
    case TermKind::Lam: {
      bool arrow = t.is(TermKind::Pi) && !occurs_free(t.cod(), 0);
      std::string name = arrow ? "" : fresh(scope, hint_for(t.child(0)));
      auto inner = scope;
      inner.push_back(name);
      SurfacePtr a = to_surface(t.child(0), scope);
      SurfacePtr b = to_surface(t.child(1), inner);
      return t.is(TermKind::Pi) ? surface::pi(name, a, b) : surface::lam(name, a, b);
    }
  }
  return nullptr;
}

namespace {

// 0: binders and arrows, 1: applications and prefix forms, 2: atoms.
std::string print_at(const SurfacePtr& s, int prec);

std::string wrap(const std::string& text, int level, int prec) { return level < prec ? "(" + text + ")" : text; }

std::string print_binder(const SurfacePtr& s) {
  std::string out = s->kind == TermKind::Pi ? "Pi" : "fun";
  SurfacePtr cur = s;
  while (cur->kind == s->kind && !cur->name.empty()) {
    out += " (" + cur->name + " : " + print_at(cur->a, 0) + ")";
    cur = cur->b;
  }
  return out + " . " + print_at(cur, 0);
}

std::string print_at(const SurfacePtr& s, int prec) {
  switch (s->kind) {
    case TermKind::Var: return s->name;
    case TermKind::Lvl: return s->level.to_string();
    case TermKind::Mty: return "Bot";
    case TermKind::Univ: return wrap("U " + print_at(s->a, 2), 1, prec);
    case TermKind::LevelLt: return wrap("Level< " + print_at(s->a, 2), 1, prec);
    case TermKind::Absurd: return wrap("absurd [" + print_at(s->a, 0) + "] " + print_at(s->b, 2), 1, prec);
    case TermKind::App: return wrap(print_at(s->a, 1) + " " + print_at(s->b, 2), 1, prec);
    case TermKind::Pi:
      if (s->name.empty()) return wrap(print_at(s->a, 1) + " -> " + print_at(s->b, 0), 0, prec);
      return wrap(print_binder(s), 0, prec);
    case TermKind::Lam: return wrap(print_binder(s), 0, prec);
  }
  return "?";
}

}  // namespace

std::string print(const SurfacePtr& s) { return print_at(s, 0); }

std::string print_term(const Term& t, const std::vector<std::string>& scope) { return print(to_surface(t, scope)); }

}  // namespace ttbfl::frontend
