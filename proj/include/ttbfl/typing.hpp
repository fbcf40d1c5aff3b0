#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "ttbfl/context.hpp"
#include "ttbfl/derivation.hpp"
#include "ttbfl/level.hpp"
#include "ttbfl/reduction.hpp"
#include "ttbfl/term.hpp"

namespace ttbfl {

enum class Verdict { Accepted, Rejected, FuelExhausted };

std::string_view verdict_name(Verdict v);

// Outcome of an algorithmic judgement. On acceptance `derivation` concludes
// exactly the judgement that was asked for.
struct Judgement {
  Verdict verdict = Verdict::Rejected;
  DerivationPtr derivation;
  std::string diagnostic;

  bool accepted() const { return verdict == Verdict::Accepted; }
  explicit operator bool() const { return accepted(); }
  // Inferred/checked type; only meaningful when accepted.
  const Term& type() const { return *derivation->type; }
};

// Sound, incomplete checker for the declarative rules. Trans and Cumul are
// only tried where an expected type is known.
class TypeChecker {
 public:
  using Printer = std::function<std::string(const Context&, const Term&)>;

  explicit TypeChecker(const LevelDomain& domain, Fuel fuel = kDefaultFuel);

  const LevelDomain& domain() const { return domain_; }
  Fuel fuel() const { return fuel_; }
  // Used to render terms in diagnostics; defaults to Term::debug.
  void set_printer(Printer printer) { printer_ = std::move(printer); }

  Judgement check_context(const Context& ctx) const;
  Judgement infer(const Context& ctx, const Term& a) const;
  Judgement check(const Context& ctx, const Term& a, const Term& type) const;
  // ctx |- k : Level< l, derived through the chain of inferred bounds.
  Judgement level_lt_check(const Context& ctx, const Term& k, const Term& l) const;

 private:
  const LevelDomain& domain_;
  Fuel fuel_;
  Printer printer_;
};

class InversionFailure : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Builds the full Lam derivation from `G |- Pi x:A.B : U k` and
// `G, x:A |- b : B`, recovering `G |- A : U k` by inversion through
// Pi/Cumul/Conv.
DerivationPtr elaborate_lam_prime(const DerivationPtr& pi_sort, const DerivationPtr& body);

}  // namespace ttbfl
