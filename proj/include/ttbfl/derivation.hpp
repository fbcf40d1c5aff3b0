#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttbfl/context.hpp"
#include "ttbfl/level.hpp"
#include "ttbfl/reduction.hpp"
#include "ttbfl/term.hpp"

namespace ttbfl {

enum class Rule : std::uint8_t { Nil, Cons, Var, Pi, Lam, App, Mty, Abs, Conv, Univ, LevelLt, Lvl, Trans, Cumul };

inline constexpr Rule kAllRules[] = {Rule::Nil,  Rule::Cons, Rule::Var,     Rule::Pi,  Rule::Lam,
                                     Rule::App,  Rule::Mty,  Rule::Abs,     Rule::Conv, Rule::Univ,
                                     Rule::LevelLt, Rule::Lvl, Rule::Trans, Rule::Cumul};

// Rule names as printed in diagnostics and exported documents ("Level<" for LevelLt).
std::string_view rule_name(Rule rule);
std::optional<Rule> rule_from_name(std::string_view name);

struct Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

// One node of a typing derivation. Nil and Cons conclude `|- ctx` and carry
// no term or type; every other rule concludes `ctx |- term : type`.
// Subderivations may be shared, so a derivation is a DAG.
struct Derivation {
  Rule rule;
  Context ctx;
  std::optional<Term> term;
  std::optional<Term> type;
  std::vector<DerivationPtr> premises;
  Fuel conv_fuel = kDefaultFuel;  // Conv only

  bool is_context_judgement() const { return rule == Rule::Nil || rule == Rule::Cons; }
};

// Builders compute the conclusion from the premises. They throw
// std::logic_error when a premise does not have the shape the rule needs;
// side conditions (i < j, conversion, ...) are left to check_derivation.
namespace derive {

DerivationPtr nil();
DerivationPtr cons(DerivationPtr wf, DerivationPtr sort);
DerivationPtr var(DerivationPtr wf, std::size_t index);
DerivationPtr pi(DerivationPtr dom_sort, DerivationPtr cod_sort);
DerivationPtr lam(DerivationPtr dom_sort, DerivationPtr pi_sort, DerivationPtr body);
DerivationPtr app(DerivationPtr fun, DerivationPtr arg);
DerivationPtr mty(DerivationPtr universe);
DerivationPtr abs(DerivationPtr sort, DerivationPtr proof);
DerivationPtr conv(DerivationPtr typing, DerivationPtr target_sort, Fuel fuel = kDefaultFuel);
DerivationPtr univ(DerivationPtr level);
DerivationPtr level_lt(DerivationPtr universe, DerivationPtr level);
DerivationPtr lvl(DerivationPtr wf, LevelValue i, LevelValue j);
DerivationPtr trans(DerivationPtr lower, DerivationPtr upper);
DerivationPtr cumul(DerivationPtr sort, DerivationPtr level);

}  // namespace derive

struct DerivationReport {
  bool ok = true;
  bool fuel_exhausted = false;
  std::vector<std::string> diagnostics;
};

// Ground truth for the declarative system: every node must instantiate its
// tagged rule exactly.
DerivationReport check_derivation(const DerivationPtr& d, const LevelDomain& domain);

// Distinct nodes and per-rule node counts.
std::size_t derivation_node_count(const DerivationPtr& d);
void count_rules(const DerivationPtr& d, std::map<Rule, std::size_t>& counts);
// Height of the tree, not counting `|- ctx` side premises.
std::size_t derivation_height(const DerivationPtr& d);

// Rewrites a derivation over context G into one over G, A. `wf` must conclude
// `|- G, A`.
DerivationPtr weaken(const DerivationPtr& d, const DerivationPtr& wf);

std::string describe_judgement(const Derivation& d);

}  // namespace ttbfl
