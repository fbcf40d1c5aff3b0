#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ttbfl/frontend/syntax.hpp"
#include "ttbfl/typing.hpp"

namespace ttbfl::frontend {

// def NAME : TYPE := BODY, optionally preceded by `#fail`. File-level
// pragmas: `#domain nat|nat-omega`, `#fuel N`.
struct Definition {
  std::string name;
  SurfacePtr type;
  SurfacePtr body;
  bool expect_fail = false;
  SourcePos pos;
};

struct SourceFile {
  std::vector<Definition> definitions;
  std::optional<std::string> domain;
  std::optional<std::uint64_t> fuel;
};

// SyntaxError on malformed input, unknown pragmas or duplicate names.
SourceFile parse_source(std::string_view text);

// Closed terms for every definition, earlier definitions inlined.
struct ResolvedDefinition {
  const Definition* source;
  Term type;
  Term body;
};
std::vector<ResolvedDefinition> resolve_source(const SourceFile& file);

struct DefinitionResult {
  std::string name;
  bool expect_fail = false;
  Judgement judgement;              // body against declared type
  std::optional<Term> inferred;     // infer mode, when it succeeds
  Term type;
  Term body;
  std::string declared;  // the type as written
  bool passed() const;
  std::string report_line() const;
};

struct CheckReport {
  std::vector<DefinitionResult> results;
  bool all_passed() const;
  bool fuel_exhausted() const;  // some failing definition ran out of fuel
  std::string text() const;
};

CheckReport check_source(const SourceFile& file, const LevelDomain& domain, Fuel fuel);

// Diagnostics render terms with invented names.
TypeChecker make_checker(const LevelDomain& domain, Fuel fuel);

}  // namespace ttbfl::frontend
