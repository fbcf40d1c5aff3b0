#pragma once

#include <cstddef>
#include <memory>
#include <optional>

#include "ttbfl/term.hpp"

namespace ttbfl {

// Every free index >= from is incremented by `by`.
Term shift(const Term& t, std::size_t by, std::size_t from = 0);

// Inverse of shift: decrements free indices >= from + by by `by`. Fails when
// an index in [from, from + by) occurs free.
std::optional<Term> unshift(const Term& t, std::size_t by, std::size_t from = 0);

// Simultaneous substitution as an explicit prefix followed by a shifted tail:
//   i < prefix_size  ->  prefix entry i
//   otherwise        ->  Var(i - prefix_size + tail_shift)
class Substitution {
 public:
  static Substitution identity();
  static Substitution shift_by(std::size_t k);

  // 0 -> head, i + 1 -> this(i). O(1).
  Substitution extend(Term head) const;

  Term lookup(std::size_t index) const;
  bool is_identity() const { return prefix_size_ == 0 && tail_shift_ == 0; }
  std::size_t prefix_size() const { return prefix_size_; }
  std::size_t tail_shift() const { return tail_shift_; }

 private:
  struct Cell {
    Term head;
    std::shared_ptr<const Cell> tail;
  };
  Substitution(std::shared_ptr<const Cell> prefix, std::size_t prefix_size, std::size_t tail_shift)
      : prefix_(std::move(prefix)), prefix_size_(prefix_size), tail_shift_(tail_shift) {}

  friend Substitution compose(const Substitution& outer, const Substitution& inner);

  std::shared_ptr<const Cell> prefix_;
  std::size_t prefix_size_ = 0;
  std::size_t tail_shift_ = 0;
};

// Capture-avoiding: under a binder, index 0 stays put and substituted terms
// are shifted past it.
Term apply(const Substitution& s, const Term& t);

// apply(compose(outer, inner), t) == apply(outer, apply(inner, t)).
Substitution compose(const Substitution& outer, const Substitution& inner);

// body[0 := arg], decrementing the other free indices of body.
Term subst1(const Term& body, const Term& arg);

// Occurrences of x in t become Var 0 of a new innermost binder; other free
// indices are shifted past it. subst1(abstract(t, x), x) == t.
Term abstract(const Term& t, const Term& x);

// Test hook for mutation testing of the metatheory harness. Any fault other
// than None makes `apply` deliberately wrong; never set outside tests.
// The setting is per thread.
enum class SubstitutionFault { None, OffByOneBinderDepth };

void set_substitution_fault(SubstitutionFault fault);
SubstitutionFault substitution_fault();

class ScopedSubstitutionFault {
 public:
  explicit ScopedSubstitutionFault(SubstitutionFault fault) : previous_(substitution_fault()) {
    set_substitution_fault(fault);
  }
  ~ScopedSubstitutionFault() { set_substitution_fault(previous_); }
  ScopedSubstitutionFault(const ScopedSubstitutionFault&) = delete;
  ScopedSubstitutionFault& operator=(const ScopedSubstitutionFault&) = delete;

 private:
  SubstitutionFault previous_;
};

}  // namespace ttbfl
