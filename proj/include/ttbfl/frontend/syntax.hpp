#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ttbfl/context.hpp"
#include "ttbfl/level.hpp"
#include "ttbfl/term.hpp"

namespace ttbfl::frontend {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
  std::string to_string() const { return std::to_string(line) + ":" + std::to_string(column); }
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(SourcePos pos, const std::string& message)
      : std::runtime_error(pos.to_string() + ": " + message), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

struct Surface;
using SurfacePtr = std::shared_ptr<const Surface>;

// Named mirror of Term. Pi and Lam bind `name`; a Pi with an empty name is
// the non-dependent arrow. Multi-binder sugar is expanded by the parser.
struct Surface {
  TermKind kind;
  std::string name;
  LevelValue level = LevelValue::finite(0);
  SurfacePtr a, b;
  SourcePos pos;
};

namespace surface {
SurfacePtr var(std::string name, SourcePos pos = {});
SurfacePtr lvl(LevelValue v, SourcePos pos = {});
SurfacePtr bot(SourcePos pos = {});
SurfacePtr univ(SurfacePtr k, SourcePos pos = {});
SurfacePtr level_lt(SurfacePtr k, SourcePos pos = {});
SurfacePtr absurd(SurfacePtr ann, SurfacePtr scrut, SourcePos pos = {});
SurfacePtr app(SurfacePtr f, SurfacePtr x, SourcePos pos = {});
SurfacePtr pi(std::string name, SurfacePtr dom, SurfacePtr cod, SourcePos pos = {});
SurfacePtr lam(std::string name, SurfacePtr ann, SurfacePtr body, SourcePos pos = {});
}  // namespace surface

// Structural equality ignoring positions.
bool surface_equal(const SurfacePtr& a, const SurfacePtr& b);

// Parses one term; the whole input must be consumed.
SurfacePtr parse_term(std::string_view text);

// Named to de Bruijn. `scope` lists binders outermost first; names not in
// scope are looked up in `globals`, whose terms must be closed.
Term resolve(const SurfacePtr& s, const std::vector<std::string>& scope = {},
             const std::map<std::string, Term>& globals = {});

// De Bruijn to named, inventing binder names that shadow nothing in `scope`.
SurfacePtr to_surface(const Term& t, const std::vector<std::string>& scope = {});

// Fresh names for the entries of a context, outermost first.
std::vector<std::string> name_context(const Context& ctx);

std::string print(const SurfacePtr& s);
std::string print_term(const Term& t, const std::vector<std::string>& scope = {});

bool is_keyword(std::string_view word);

}  // namespace ttbfl::frontend
