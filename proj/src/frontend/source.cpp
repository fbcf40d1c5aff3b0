#include "ttbfl/frontend/source.hpp"

#include <charconv>
#include <set>

#include "lexer.hpp"

namespace ttbfl::frontend {

using detail::Tok;

SourceFile parse_source(std::string_view text) {
  SourceFile file;
  detail::Parser p(detail::lex(text));
  std::set<std::string> names;
  bool pending_fail = false;
  while (!p.at(Tok::End)) {
    if (p.at(Tok::Pragma)) {
      const detail::Token& t = p.advance();
      if (t.text == "fail") {
        if (!t.arg.empty()) throw SyntaxError(t.pos, "#fail takes no argument");
        pending_fail = true;
      } else if (t.text == "domain") {
        if (!domain_by_name(t.arg)) throw SyntaxError(t.pos, "unknown level domain '" + t.arg + "'");
        file.domain = t.arg;
      } else if (t.text == "fuel") {
        std::uint64_t n = 0;
        auto [end, ec] = std::from_chars(t.arg.data(), t.arg.data() + t.arg.size(), n);
        if (ec != std::errc() || end != t.arg.data() + t.arg.size()) {
          throw SyntaxError(t.pos, "#fuel expects a number");
        }
        file.fuel = n;
      } else {
        throw SyntaxError(t.pos, "unknown pragma '#" + t.text + "'");
      }
      continue;
    }
    SourcePos pos = p.expect(Tok::Def, "'def' or a pragma").pos;
    const detail::Token& name = p.expect(Tok::Ident, "a definition name");
    Definition d;
    d.name = name.text;
    d.pos = pos;
    if (!names.insert(d.name).second) throw SyntaxError(name.pos, "duplicate definition '" + d.name + "'");
    p.expect(Tok::Colon, "':'");
    d.type = p.term();
    p.expect(Tok::Assign, "':='");
    d.body = p.term();
    d.expect_fail = pending_fail;
    pending_fail = false;
    file.definitions.push_back(std::move(d));
  }
  if (pending_fail) p.fail("#fail must precede a definition");
  return file;
}

std::vector<ResolvedDefinition> resolve_source(const SourceFile& file) {
  std::vector<ResolvedDefinition> out;
  std::map<std::string, Term> globals;
  for (const Definition& d : file.definitions) {
    Term type = resolve(d.type, {}, globals);
    Term body = resolve(d.body, {}, globals);
    globals.insert_or_assign(d.name, body);
    out.push_back({&d, type, body});
  }
  return out;
}

TypeChecker make_checker(const LevelDomain& domain, Fuel fuel) {
  TypeChecker tc(domain, fuel);
  tc.set_printer([](const Context& ctx, const Term& t) { return print_term(t, name_context(ctx)); });
  return tc;
}

bool DefinitionResult::passed() const {
  if (expect_fail) return !judgement.accepted();
  return judgement.accepted();
}

std::string DefinitionResult::report_line() const {
  if (expect_fail) {
    if (judgement.accepted()) return "FAIL " + name + ": accepted but marked #fail";
    return "ok " + name + " rejected as expected: " + judgement.diagnostic;
  }
  if (!judgement.accepted()) return "FAIL " + name + ": " + judgement.diagnostic;
  std::string line = "ok " + name + " : " + (declared.empty() ? print_term(type) : declared);
  line += " [inferred: " + (inferred ? print_term(*inferred) : std::string("none")) + "]";
  return line;
}

bool CheckReport::all_passed() const {
  for (const auto& r : results) {
    if (!r.passed()) return false;
  }
  return true;
}

bool CheckReport::fuel_exhausted() const {
  for (const auto& r : results) {
    if (!r.passed() && r.judgement.verdict == Verdict::FuelExhausted) return true;
  }
  return false;
}

std::string CheckReport::text() const {
  std::string out;
  std::size_t passed = 0;
  for (const auto& r : results) {
    out += r.report_line() + "\n";
    passed += r.passed();
  }
  out += "passed " + std::to_string(passed) + "/" + std::to_string(results.size()) + "\n";
  return out;
}

CheckReport check_source(const SourceFile& file, const LevelDomain& domain, Fuel fuel) {
  TypeChecker tc = make_checker(domain, fuel);
  CheckReport report;
  for (const ResolvedDefinition& d : resolve_source(file)) {
    DefinitionResult r{d.source->name, d.source->expect_fail, tc.check(Context(), d.body, d.type), std::nullopt,
                       d.type, d.body, print(d.source->type)};
    Judgement inferred = tc.infer(Context(), d.body);
    if (inferred.accepted()) r.inferred = inferred.type();
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace ttbfl::frontend
