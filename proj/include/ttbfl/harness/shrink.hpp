#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ttbfl/term.hpp"

namespace ttbfl::harness {

// Strictly smaller variants of t: a subterm replaced by one of its own
// children (binder children are unshifted when possible), by Bot or by Lvl 0,
// and lambda/Pi wrappers dropped.
std::vector<Term> shrink_candidates(const Term& t);

// Greedy descent: keeps the first candidate that still satisfies `fails`,
// until none does or `max_tries` predicate calls were spent. The result
// satisfies `fails` whenever the input does.
Term shrink(const Term& t, const std::function<bool(const Term&)>& fails, std::size_t max_tries = 400);

}  // namespace ttbfl::harness
