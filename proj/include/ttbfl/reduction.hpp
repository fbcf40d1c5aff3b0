#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ttbfl/term.hpp"

namespace ttbfl {

// Budget of beta contractions for one normalization attempt.
struct Fuel {
  std::uint64_t steps = 10000;
};

inline constexpr Fuel kDefaultFuel{10000};

class FuelExhausted : public std::runtime_error {
 public:
  explicit FuelExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Whether some subterm is a beta-redex (App(Lam(_, _), _)).
bool has_redex(const Term& t);

// Decides a => b for the parallel reduction relation (congruence on every
// former plus simultaneous beta).
bool par_step_check(const Term& a, const Term& b);

// Every b with a => b, or nullopt once more than `limit` distinct reducts
// exist. Exponential in the number of redexes.
std::optional<std::vector<Term>> parallel_reducts(const Term& a, std::size_t limit);

// Takahashi development: contract every redex of `a` at once.
Term complete_development(const Term& a);
// Same, adding the number of contracted redexes to `contracted`.
Term complete_development(const Term& a, std::uint64_t& contracted);

struct ParsResult {
  Term term;
  bool normal = false;  // reached a term without redexes
  std::uint64_t steps = 0;
};

// Iterates complete_development until no redex is left or the fuel is spent.
ParsResult pars(const Term& a, Fuel fuel);

// Like pars, but throws FuelExhausted instead of returning a non-normal term.
Term normalize(const Term& a, Fuel fuel);

// One call-by-name step: beta at the head, otherwise the function of an
// application or the scrutinee of absurd. No reduction under binders.
std::optional<Term> cbn_step(const Term& a);

struct EvalResult {
  Term term;
  bool halted = false;  // no cbn step applies (a value or a stuck term)
  std::uint64_t steps = 0;
};

EvalResult cbn_eval(const Term& a, Fuel fuel);

enum class Convertibility { Yes, No, Undecided };

// Joinability under =>*. Undecided when either side fails to normalize
// within the fuel.
Convertibility convertible(const Term& a, const Term& b, Fuel fuel);

struct ReductionTrace {
  enum class Kind { Parallel, CallByName };
  Kind kind = Kind::Parallel;
  std::vector<Term> terms;

  // Each adjacent pair is a single step of the tagged relation.
  bool valid() const;
};

// Development trace t0, t0^T, ... of at most `max_steps` steps, stopping early
// at a normal form.
ReductionTrace development_trace(const Term& a, std::size_t max_steps);

}  // namespace ttbfl
