#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "ttbfl/context.hpp"
#include "ttbfl/derivation.hpp"
#include "ttbfl/level.hpp"
#include "ttbfl/reduction.hpp"
#include "ttbfl/term.hpp"

namespace ttbfl::harness {

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t max_size = 24;  // node budget per generated term
  std::size_t max_context = 3;
  const LevelDomain* domain = &nat_omega_domain();
  Fuel fuel = kDefaultFuel;
  std::size_t cases = 1000;
  std::size_t jobs = 1;
};

// G |- term : type, with the derivation that was built to produce it.
struct Case {
  std::size_t index = 0;
  Context ctx;
  Term term;
  Term type;
  DerivationPtr derivation;
};

enum class CaseShape {
  Any,
  Closed,
  // Closed, at a type U k or Level< l.
  ClosedSortOrLevel,
};

// Per-case seed; cases are independent of each other and of the job count.
std::uint64_t case_seed(std::uint64_t seed, std::size_t index);

// nullopt when generation ran out of attempts (counted as skipped).
std::optional<Case> generate_case(const GenConfig& cfg, std::size_t index, CaseShape shape);

// Untyped terms over `free_vars` variables, biased toward redexes.
Term random_term(std::mt19937_64& rng, std::size_t size, std::size_t free_vars);

}  // namespace ttbfl::harness
