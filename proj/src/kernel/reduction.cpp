#include "ttbfl/reduction.hpp"

#include <unordered_set>

#include "ttbfl/substitution.hpp"

namespace ttbfl {

namespace {

bool is_beta_redex(const Term& t) { return t.is(TermKind::App) && t.fun().is(TermKind::Lam); }

// Does substituting x' for the hole (index `depth`) in `pattern` give `b`?
// The first occurrence fixes x'; later occurrences must agree.
bool match_hole(const Term& pattern, const Term& b, std::size_t depth, std::optional<Term>& binding) {
  if (pattern.is(TermKind::Var)) {
    std::size_t j = pattern.index();
    if (j < depth) return b.is(TermKind::Var) && b.index() == j;
    if (j > depth) return b.is(TermKind::Var) && b.index() == j - 1;
    auto candidate = unshift(b, depth, 0);
    if (!candidate) return false;
    if (binding) return alpha_equal(*binding, *candidate);
    binding = std::move(*candidate);
    return true;
  }
  if (pattern.free_bound() <= depth) {
    // No hole below; substitution only renumbers free indices above depth,
    // and there are none.
    return alpha_equal(pattern, b);
  }
  if (pattern.kind() != b.kind()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    if (!match_hole(pattern.child(i), b.child(i), pattern.binds(i) ? depth + 1 : depth, binding)) return false;
  }
  return true;
}

using TermSet = std::unordered_set<Term, TermHash>;

bool reducts_into(const Term& t, std::size_t limit, std::vector<Term>& out);

bool insert_unique(TermSet& seen, std::vector<Term>& out, Term t, std::size_t limit) {
  if (seen.insert(t).second) {
    out.push_back(std::move(t));
    if (out.size() > limit) return false;
  }
  return true;
}

bool reducts_into(const Term& t, std::size_t limit, std::vector<Term>& out) {
  if (t.arity() == 0) {
    out.push_back(t);
    return true;
  }
  std::vector<Term> first;
  if (!reducts_into(t.child(0), limit, first)) return false;
  TermSet seen;
  if (t.arity() == 1) {
    for (auto& c : first) {
      if (!insert_unique(seen, out, t.with_children(c), limit)) return false;
    }
    return true;
  }
  std::vector<Term> second;
  if (!reducts_into(t.child(1), limit, second)) return false;
  for (auto& c0 : first) {
    for (auto& c1 : second) {
      if (!insert_unique(seen, out, t.with_children(c0, c1), limit)) return false;
    }
  }
  if (is_beta_redex(t)) {
    std::vector<Term> bodies;
    if (!reducts_into(t.fun().body(), limit, bodies)) return false;
    for (auto& body : bodies) {
      for (auto& arg : second) {
        if (!insert_unique(seen, out, subst1(body, arg), limit)) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool has_redex(const Term& t) {
  if (is_beta_redex(t)) return true;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (has_redex(t.child(i))) return true;
  }
  return false;
}

bool par_step_check(const Term& a, const Term& b) {
  if (a.arity() == 0) return alpha_equal(a, b);
  if (a.kind() == b.kind()) {
    bool congruent = true;
    for (std::size_t i = 0; i < a.arity() && congruent; ++i) {
      congruent = par_step_check(a.child(i), b.child(i));
    }
    if (congruent) return true;
  }
  if (!is_beta_redex(a)) return false;

  // P-Beta: b must be body'[0 := arg'] for some body => body', arg => arg'.
  const Term& body = a.fun().body();
  const Term& arg = a.arg();
  auto bodies = parallel_reducts(body, SIZE_MAX / 8);
  for (const Term& candidate : *bodies) {
    std::optional<Term> binding;
    if (!match_hole(candidate, b, 0, binding)) continue;
    // An unused hole leaves arg' free; arg => arg always holds.
    if (!binding || par_step_check(arg, *binding)) return true;
  }
  return false;
}

std::optional<std::vector<Term>> parallel_reducts(const Term& a, std::size_t limit) {
  std::vector<Term> out;
  if (!reducts_into(a, limit, out)) return std::nullopt;
  return out;
}

Term complete_development(const Term& a, std::uint64_t& contracted) {
  if (is_beta_redex(a)) {
    ++contracted;
    Term body = complete_development(a.fun().body(), contracted);
    Term arg = complete_development(a.arg(), contracted);
    return subst1(body, arg);
  }
  if (a.arity() == 0) return a;
  if (a.arity() == 1) return a.with_children(complete_development(a.child(0), contracted));
  Term c0 = complete_development(a.child(0), contracted);
  Term c1 = complete_development(a.child(1), contracted);
  return a.with_children(std::move(c0), std::move(c1));
}

Term complete_development(const Term& a) {
  std::uint64_t ignored = 0;
  return complete_development(a, ignored);
}

ParsResult pars(const Term& a, Fuel fuel) {
  ParsResult result{a, false, 0};
  while (has_redex(result.term)) {
    if (result.steps >= fuel.steps) return result;
    std::uint64_t contracted = 0;
    result.term = complete_development(result.term, contracted);
    result.steps += contracted;
  }
  result.normal = true;
  return result;
}

Term normalize(const Term& a, Fuel fuel) {
  ParsResult r = pars(a, fuel);
  if (!r.normal) {
    throw FuelExhausted("no normal form within " + std::to_string(fuel.steps) + " steps");
  }
  return r.term;
}

std::optional<Term> cbn_step(const Term& a) {
  if (is_beta_redex(a)) return subst1(a.fun().body(), a.arg());
  if (a.is(TermKind::App)) {
    if (auto f = cbn_step(a.fun())) return Term::app(*f, a.arg());
    return std::nullopt;
  }
  if (a.is(TermKind::Absurd)) {
    if (auto s = cbn_step(a.scrut())) return Term::absurd(a.ann(), *s);
  }
  return std::nullopt;
}

EvalResult cbn_eval(const Term& a, Fuel fuel) {
  EvalResult result{a, false, 0};
  while (result.steps < fuel.steps) {
    auto next = cbn_step(result.term);
    if (!next) {
      result.halted = true;
      return result;
    }
    result.term = std::move(*next);
    ++result.steps;
  }
  result.halted = !cbn_step(result.term).has_value();
  return result;
}

Convertibility convertible(const Term& a, const Term& b, Fuel fuel) {
  if (alpha_equal(a, b)) return Convertibility::Yes;
  ParsResult na = pars(a, fuel);
  ParsResult nb = pars(b, fuel);
  if (na.normal && nb.normal) return alpha_equal(na.term, nb.term) ? Convertibility::Yes : Convertibility::No;
  if (alpha_equal(na.term, nb.term)) return Convertibility::Yes;
  return Convertibility::Undecided;
}

bool ReductionTrace::valid() const {
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    bool ok = false;
    if (kind == Kind::Parallel) {
      ok = par_step_check(terms[i], terms[i + 1]);
    } else {
      auto next = cbn_step(terms[i]);
      ok = next && alpha_equal(*next, terms[i + 1]);
    }
    if (!ok) return false;
  }
  return true;
}

ReductionTrace development_trace(const Term& a, std::size_t max_steps) {
  ReductionTrace trace;
  trace.terms.push_back(a);
  while (trace.terms.size() <= max_steps && has_redex(trace.terms.back())) {
    trace.terms.push_back(complete_development(trace.terms.back()));
  }
  return trace;
}

}  // namespace ttbfl
