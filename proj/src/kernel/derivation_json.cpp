#include "ttbfl/derivation_json.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>

namespace ttbfl {

using nlohmann::json;

json term_to_json(const Term& t) {
  json out = json::array({std::string(kind_name(t.kind()))});
  switch (t.kind()) {
    case TermKind::Var: out.push_back(t.index()); break;
    case TermKind::Lvl: out.push_back(t.level().to_string()); break;
    default:
      for (std::size_t i = 0; i < t.arity(); ++i) out.push_back(term_to_json(t.child(i)));
  }
  return out;
}

namespace {

[[noreturn]] void malformed(const std::string& what) { throw std::invalid_argument("malformed term document: " + what); }

const json& arg(const json& j, std::size_t i) {
  if (j.size() <= i) malformed("missing operand");
  return j[i];
}

}  // namespace

Term term_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_string()) malformed("expected [kind, ...]");
  const std::string kind = j[0];
  auto expect_size = [&](std::size_t n) {
    if (j.size() != n + 1) malformed(kind + " takes " + std::to_string(n) + " operands");
  };
  if (kind == "Var") {
    expect_size(1);
    if (!arg(j, 1).is_number_unsigned()) malformed("Var index");
    return Term::var(j[1].get<std::size_t>());
  }
  if (kind == "Lvl") {
    expect_size(1);
    if (!arg(j, 1).is_string()) malformed("Lvl literal");
    auto v = nat_omega_domain().parse(j[1].get<std::string>());
    if (!v) malformed("Lvl literal " + j[1].get<std::string>());
    return Term::lvl(*v);
  }
  if (kind == "Mty") {
    expect_size(0);
    return Term::mty();
  }
  if (kind == "Univ" || kind == "LevelLt") {
    expect_size(1);
    Term op = term_from_json(j[1]);
    return kind == "Univ" ? Term::univ(op) : Term::level_lt(op);
  }
  expect_size(2);
  Term a = term_from_json(j[1]);
  Term b = term_from_json(j[2]);
  if (kind == "Pi") return Term::pi(a, b);
  if (kind == "Lam") return Term::lam(a, b);
  if (kind == "App") return Term::app(a, b);
  if (kind == "Absurd") return Term::absurd(a, b);
  malformed("unknown kind " + kind);
}

json derivation_to_json(const DerivationPtr& d) {
  json out;
  out["rule"] = std::string(rule_name(d->rule));
  json ctx = json::array();
  for (const Term& entry : d->ctx.entries()) ctx.push_back(term_to_json(entry));
  out["ctx"] = std::move(ctx);
  if (d->term) out["term"] = term_to_json(*d->term);
  if (d->type) out["type"] = term_to_json(*d->type);
  if (d->rule == Rule::Conv) out["fuel"] = d->conv_fuel.steps;
  json premises = json::array();
  for (const auto& p : d->premises) premises.push_back(derivation_to_json(p));
  out["premises"] = std::move(premises);
  return out;
}

DerivationPtr derivation_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("malformed derivation document: expected an object");
  auto rule = rule_from_name(j.value("rule", std::string()));
  if (!rule) throw std::invalid_argument("malformed derivation document: unknown rule");
  auto d = std::make_shared<Derivation>();
  d->rule = *rule;
  std::vector<Term> entries;
  for (const json& e : j.at("ctx")) entries.push_back(term_from_json(e));
  d->ctx = Context(std::move(entries));
  if (j.contains("term")) d->term = term_from_json(j["term"]);
  if (j.contains("type")) d->type = term_from_json(j["type"]);
  if (j.contains("fuel")) d->conv_fuel = Fuel{j["fuel"].get<std::uint64_t>()};
  for (const json& p : j.at("premises")) d->premises.push_back(derivation_from_json(p));
  return d;
}

}  // namespace ttbfl
