#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ttbfl/frontend/syntax.hpp"

namespace ttbfl::frontend::detail {

enum class Tok {
  Ident, Level, Fun, Pi, Univ, LevelLt, Bot, Absurd, Def,
  LParen, RParen, LBrack, RBrack, Colon, Assign, Dot, Arrow, Pragma, End
};

struct Token {
  Tok kind;
  std::string text;  // identifier, literal or pragma name
  LevelValue level = LevelValue::finite(0);
  SourcePos pos;
  std::string arg;  // pragma argument: rest of the line
};

std::vector<Token> lex(std::string_view text);

std::string describe(const Token& t);

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  SurfacePtr term();
  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  const Token& expect(Tok k, const char* what);
  [[noreturn]] void fail(const std::string& message) const;

 private:
  SurfacePtr binder();
  SurfacePtr application();
  SurfacePtr head();
  SurfacePtr atom();
  bool starts_atom() const;

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace ttbfl::frontend::detail
