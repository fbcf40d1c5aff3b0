#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ttbfl/term.hpp"

namespace ttbfl {

// Ordered telescope of types, outermost first. De Bruijn index 0 is the last
// entry. Copies share storage.
class Context {
 public:
  Context();
  explicit Context(std::vector<Term> entries);

  std::size_t size() const { return entries_->size(); }
  bool empty() const { return entries_->empty(); }

  // Raw entry at position i (0 = outermost), scoped over the entries before it.
  const Term& entry(std::size_t position) const { return (*entries_)[position]; }
  const std::vector<Term>& entries() const { return *entries_; }

  // Type of Var(index), shifted into the scope of the whole context.
  // Throws std::out_of_range when index >= size().
  Term lookup(std::size_t index) const;

  Context extend(Term type) const;
  Context prefix(std::size_t length) const;

  friend bool operator==(const Context& a, const Context& b);

 private:
  std::shared_ptr<const std::vector<Term>> entries_;
};

}  // namespace ttbfl
