#pragma once

#include <random>

#include "ttbfl/term.hpp"

namespace ttbfl::testing {

// Untyped terms over `free_vars` variables, biased toward redexes.
class RandomTerms {
 public:
  explicit RandomTerms(std::uint64_t seed) : rng_(seed) {}

  Term next(std::size_t size, std::size_t free_vars) { return gen(size, free_vars); }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  Term leaf(std::size_t depth) {
    std::size_t r = pick(depth > 0 ? 4 : 3);
    if (r == 0) return Term::mty();
    if (r == 1) return Term::lvl(LevelValue::finite(pick(3)));
    if (r == 2) return Term::lvl(LevelValue::omega_plus(pick(2)));
    return Term::var(pick(depth));
  }

  Term gen(std::size_t size, std::size_t depth) {
    if (size <= 1) return leaf(depth);
    std::size_t rest = size - 1;
    switch (pick(8)) {
      case 0: return Term::univ(gen(rest, depth));
      case 1: return Term::level_lt(gen(rest, depth));
      case 2:
      case 3: {
        std::size_t l = 1 + pick(rest);
        if (l >= rest) return Term::lam(leaf(depth), gen(rest - 1 > 0 ? rest - 1 : 1, depth + 1));
        return Term::lam(gen(l, depth), gen(rest - l, depth + 1));
      }
      case 4: {
        std::size_t l = 1 + pick(rest);
        if (l >= rest) return Term::pi(leaf(depth), gen(rest - 1 > 0 ? rest - 1 : 1, depth + 1));
        return Term::pi(gen(l, depth), gen(rest - l, depth + 1));
      }
      case 5: {
        if (rest >= 3) {
          std::size_t b = 1 + pick(rest - 2);
          return Term::app(Term::lam(leaf(depth), gen(b, depth + 1)), gen(rest - 1 - b, depth));
        }
        return Term::app(leaf(depth), leaf(depth));
      }
      case 6: {
        std::size_t l = 1 + pick(rest);
        if (l >= rest) return Term::app(leaf(depth), gen(1, depth));
        return Term::app(gen(l, depth), gen(rest - l, depth));
      }
      default: {
        std::size_t l = 1 + pick(rest);
        if (l >= rest) return Term::absurd(leaf(depth), gen(1, depth));
        return Term::absurd(gen(l, depth), gen(rest - l, depth));
      }
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace ttbfl::testing
