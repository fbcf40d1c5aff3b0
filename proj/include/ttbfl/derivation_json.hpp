#pragma once

#include <json.hpp>

#include "ttbfl/derivation.hpp"
#include "ttbfl/term.hpp"

namespace ttbfl {

// Terms as nested arrays: ["Var", 0], ["Lvl", "omega+1"], ["Pi", A, B], ["Mty"].
nlohmann::json term_to_json(const Term& t);
// Throws std::invalid_argument on malformed input.
Term term_from_json(const nlohmann::json& j);

// {"rule", "ctx", "term", "type", "premises", "fuel"}; "term"/"type" are
// absent for Nil and Cons, "fuel" only present for Conv.
nlohmann::json derivation_to_json(const DerivationPtr& d);
DerivationPtr derivation_from_json(const nlohmann::json& j);

}  // namespace ttbfl
