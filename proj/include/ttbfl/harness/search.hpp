#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ttbfl/context.hpp"
#include "ttbfl/derivation.hpp"
#include "ttbfl/level.hpp"
#include "ttbfl/reduction.hpp"
#include "ttbfl/term.hpp"

namespace ttbfl::harness {

struct SearchConfig {
  // Height bound, not counting context well-formedness subtrees.
  std::size_t max_depth = 8;
  const LevelDomain* domain = &nat_omega_domain();
  Fuel fuel{200};
};

struct SearchResult {
  DerivationPtr derivation;  // null when none exists within the bounds
  std::size_t goals = 0;     // distinct (goal, depth) pairs explored
  std::size_t pool_size = 0;
  bool context_ok = false;
};

// Backward search for ctx |- a : type over every declarative rule. Premise
// terms that do not occur in the conclusion (App domains and codomains, Conv
// sources, Trans and Cumul middles, universe levels of Abs, Lam, Mty and
// Level<) range over a finite pool: the subterms of the judgement, its
// context, a few concrete levels and one round of U / Level< / absurd
// wrappers around those. A miss is therefore relative to that pool.
SearchResult search_derivation(const Context& ctx, const Term& a, const Term& type, const SearchConfig& cfg = {});

}  // namespace ttbfl::harness
