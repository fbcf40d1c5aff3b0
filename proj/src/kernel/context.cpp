#include "ttbfl/context.hpp"

#include <stdexcept>
#include <string>

#include "ttbfl/substitution.hpp"

namespace ttbfl {

Context::Context() : entries_(std::make_shared<const std::vector<Term>>()) {}

Context::Context(std::vector<Term> entries)
    : entries_(std::make_shared<const std::vector<Term>>(std::move(entries))) {}

Term Context::lookup(std::size_t index) const {
  if (index >= size()) throw std::out_of_range("unbound variable index " + std::to_string(index));
  return shift(entry(size() - 1 - index), index + 1);
}

Context Context::extend(Term type) const {
  std::vector<Term> next = *entries_;
  next.push_back(std::move(type));
  return Context(std::move(next));
}

Context Context::prefix(std::size_t length) const {
  if (length >= size()) return *this;
  return Context(std::vector<Term>(entries_->begin(), entries_->begin() + static_cast<std::ptrdiff_t>(length)));
}

bool operator==(const Context& a, const Context& b) {
  if (a.entries_ == b.entries_) return true;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!alpha_equal(a.entry(i), b.entry(i))) return false;
  }
  return true;
}

}  // namespace ttbfl
