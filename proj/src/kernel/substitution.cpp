#include "ttbfl/substitution.hpp"

#include <vector>

namespace ttbfl {

namespace {

thread_local SubstitutionFault g_fault = SubstitutionFault::None;

Term shift_rec(const Term& t, std::size_t by, std::size_t from) {
  if (t.free_bound() <= from) return t;
  if (t.is(TermKind::Var)) return Term::var(t.index() + by);
  if (t.arity() == 1) return t.with_children(shift_rec(t.child(0), by, from));
  return t.with_children(shift_rec(t.child(0), by, from),
                         shift_rec(t.child(1), by, t.binds(1) ? from + 1 : from));
}

// Returns nullopt when an index in [from, from + by) occurs free.
std::optional<Term> unshift_rec(const Term& t, std::size_t by, std::size_t from) {
  if (t.free_bound() <= from) return t;
  if (t.is(TermKind::Var)) {
    std::size_t i = t.index();
    if (i < from + by) return std::nullopt;
    return Term::var(i - by);
  }
  auto c0 = unshift_rec(t.child(0), by, from);
  if (!c0) return std::nullopt;
  if (t.arity() == 1) return t.with_children(*c0);
  auto c1 = unshift_rec(t.child(1), by, t.binds(1) ? from + 1 : from);
  if (!c1) return std::nullopt;
  return t.with_children(*c0, *c1);
}

Term apply_rec(const Substitution& s, const Term& t, std::size_t depth, std::size_t step) {
  if (t.free_bound() <= depth) return t;
  if (t.is(TermKind::Var)) {
    std::size_t i = t.index();
    if (i < depth) return t;
    return shift(s.lookup(i - depth), depth);
  }
  if (t.arity() == 1) return t.with_children(apply_rec(s, t.child(0), depth, step));
  return t.with_children(apply_rec(s, t.child(0), depth, step),
                         apply_rec(s, t.child(1), t.binds(1) ? depth + step : depth, step));
}

}  // namespace

Term shift(const Term& t, std::size_t by, std::size_t from) {
  if (by == 0) return t;
  return shift_rec(t, by, from);
}

std::optional<Term> unshift(const Term& t, std::size_t by, std::size_t from) {
  if (by == 0) return t;
  return unshift_rec(t, by, from);
}

Substitution Substitution::identity() { return Substitution(nullptr, 0, 0); }

Substitution Substitution::shift_by(std::size_t k) { return Substitution(nullptr, 0, k); }

Substitution Substitution::extend(Term head) const {
  return Substitution(std::make_shared<const Cell>(Cell{std::move(head), prefix_}), prefix_size_ + 1, tail_shift_);
}

Term Substitution::lookup(std::size_t index) const {
  if (index >= prefix_size_) return Term::var(index - prefix_size_ + tail_shift_);
  const Cell* cell = prefix_.get();
  for (std::size_t i = 0; i < index; ++i) cell = cell->tail.get();
  return cell->head;
}

Term apply(const Substitution& s, const Term& t) {
  if (s.is_identity()) return t;
  std::size_t step = g_fault == SubstitutionFault::OffByOneBinderDepth ? 2 : 1;
  return apply_rec(s, t, 0, step);
}

Substitution compose(const Substitution& outer, const Substitution& inner) {
  std::vector<Term> prefix;
  for (const Substitution::Cell* c = inner.prefix_.get(); c != nullptr; c = c->tail.get()) {
    prefix.push_back(apply(outer, c->head));
  }
  std::size_t tail_shift = 0;
  if (inner.tail_shift_ >= outer.prefix_size_) {
    tail_shift = inner.tail_shift_ - outer.prefix_size_ + outer.tail_shift_;
  } else {
    for (std::size_t j = inner.tail_shift_; j < outer.prefix_size_; ++j) prefix.push_back(outer.lookup(j));
    tail_shift = outer.tail_shift_;
  }
  Substitution result = Substitution::shift_by(tail_shift);
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) result = result.extend(*it);
  return result;
}

Term subst1(const Term& body, const Term& arg) {
  return apply(Substitution::identity().extend(arg), body);
}

void set_substitution_fault(SubstitutionFault fault) { g_fault = fault; }

SubstitutionFault substitution_fault() { return g_fault; }

namespace {

Term abstract_at(const Term& t, const Term& x, std::size_t depth) {
  if (alpha_equal(t, shift(x, depth))) return Term::var(depth);
  if (t.is(TermKind::Var)) return t.index() >= depth ? Term::var(t.index() + 1) : t;
  if (t.arity() == 0) return t;
  Term c0 = abstract_at(t.child(0), x, depth + (t.binds(0) ? 1 : 0));
  if (t.arity() == 1) return t.with_children(c0);
  return t.with_children(c0, abstract_at(t.child(1), x, depth + (t.binds(1) ? 1 : 0)));
}

}  // namespace

Term abstract(const Term& t, const Term& x) { return abstract_at(t, x, 0); }

}  // namespace ttbfl
