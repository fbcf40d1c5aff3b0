#include <cctype>

#include "lexer.hpp"

namespace ttbfl::frontend {

namespace surface {

namespace {
SurfacePtr node(TermKind kind, std::string name, SurfacePtr a, SurfacePtr b, SourcePos pos) {
  auto s = std::make_shared<Surface>();
  s->kind = kind;
  s->name = std::move(name);
  s->a = std::move(a);
  s->b = std::move(b);
  s->pos = pos;
  return s;
}
}  // namespace

SurfacePtr var(std::string name, SourcePos pos) { return node(TermKind::Var, std::move(name), nullptr, nullptr, pos); }
SurfacePtr lvl(LevelValue v, SourcePos pos) {
  auto s = std::make_shared<Surface>();
  s->kind = TermKind::Lvl;
  s->level = v;
  s->pos = pos;
  return s;
}
SurfacePtr bot(SourcePos pos) { return node(TermKind::Mty, "", nullptr, nullptr, pos); }
SurfacePtr univ(SurfacePtr k, SourcePos pos) { return node(TermKind::Univ, "", std::move(k), nullptr, pos); }
SurfacePtr level_lt(SurfacePtr k, SourcePos pos) { return node(TermKind::LevelLt, "", std::move(k), nullptr, pos); }
SurfacePtr absurd(SurfacePtr ann, SurfacePtr scrut, SourcePos pos) {
  return node(TermKind::Absurd, "", std::move(ann), std::move(scrut), pos);
}
SurfacePtr app(SurfacePtr f, SurfacePtr x, SourcePos pos) { return node(TermKind::App, "", std::move(f), std::move(x), pos); }
SurfacePtr pi(std::string name, SurfacePtr dom, SurfacePtr cod, SourcePos pos) {
  return node(TermKind::Pi, std::move(name), std::move(dom), std::move(cod), pos);
}
SurfacePtr lam(std::string name, SurfacePtr ann, SurfacePtr body, SourcePos pos) {
  return node(TermKind::Lam, std::move(name), std::move(ann), std::move(body), pos);
}

}  // namespace surface

bool surface_equal(const SurfacePtr& a, const SurfacePtr& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind || a->name != b->name) return false;
  if (a->kind == TermKind::Lvl && a->level != b->level) return false;
  return surface_equal(a->a, b->a) && surface_equal(a->b, b->b);
}

bool is_keyword(std::string_view w) {
  return w == "fun" || w == "Pi" || w == "U" || w == "Bot" || w == "absurd" || w == "def" || w == "omega" ||
         w == "Level";
}

namespace detail {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\''; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourcePos start = here();
      if (i_ >= text_.size()) {
        out.push_back({Tok::End, "", LevelValue::finite(0), start});
        return out;
      }
      out.push_back(next(start));
    }
  }

 private:
  SourcePos here() const { return {line_, col_}; }

  char at(std::size_t k = 0) const { return i_ + k < text_.size() ? text_[i_ + k] : '\0'; }
  bool starts(std::string_view s) const { return text_.substr(i_, s.size()) == s; }

  void bump(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i_ < text_.size(); ++k) {
      // Columns count code points, not bytes.
      if (text_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(text_[i_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++i_;
    }
  }

  void skip_space() {
    for (;;) {
      if (std::isspace(static_cast<unsigned char>(at())) != 0) {
        bump();
      } else if (starts("--")) {
        while (i_ < text_.size() && at() != '\n') bump();
      } else {
        return;
      }
    }
  }

  Token simple(Tok kind, std::size_t len, SourcePos pos) {
    std::string text(text_.substr(i_, len));
    bump(len);
    return {kind, text, LevelValue::finite(0), pos};
  }

  Token level_literal(std::string text, SourcePos pos) {
    auto v = nat_omega_domain().parse(text);
    if (!v) throw SyntaxError(pos, "malformed level literal '" + text + "'");
    return {Tok::Level, text, *v, pos};
  }

  Token next(SourcePos pos) {
    char c = at();
    switch (c) {
      case '(': return simple(Tok::LParen, 1, pos);
      case ')': return simple(Tok::RParen, 1, pos);
      case '[': return simple(Tok::LBrack, 1, pos);
      case ']': return simple(Tok::RBrack, 1, pos);
      case '.': return simple(Tok::Dot, 1, pos);
      case ':': return starts(":=") ? simple(Tok::Assign, 2, pos) : simple(Tok::Colon, 1, pos);
      default: break;
    }
    if (starts("->")) return simple(Tok::Arrow, 2, pos);
    if (starts("→")) return simple(Tok::Arrow, 3, pos);
    if (starts("λ")) return simple(Tok::Fun, 2, pos);
    if (starts("Π")) return simple(Tok::Pi, 2, pos);
    if (starts("⊥")) return simple(Tok::Bot, 3, pos);
    if (starts("ω")) {
      bump(2);
      return omega_tail("omega", pos);
    }
    if (c == '#') {
      bump();
      std::size_t start = i_;
      while (ident_char(at()) || at() == '-') bump();
      std::string name(text_.substr(start, i_ - start));
      if (name.empty()) throw SyntaxError(pos, "expected a pragma name after '#'");
      std::size_t arg_start = i_;
      while (i_ < text_.size() && at() != '\n' && !starts("--")) bump();
      std::string arg(text_.substr(arg_start, i_ - arg_start));
      arg.erase(0, arg.find_first_not_of(" \t\r"));
      arg.erase(arg.find_last_not_of(" \t\r") + 1);
      return {Tok::Pragma, name, LevelValue::finite(0), pos, arg};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      std::size_t start = i_;
      while (std::isdigit(static_cast<unsigned char>(at())) != 0) bump();
      if (ident_char(at())) throw SyntaxError(pos, "malformed level literal");
      return level_literal(std::string(text_.substr(start, i_ - start)), pos);
    }
    if (ident_start(c)) {
      std::size_t start = i_;
      while (ident_char(at())) bump();
      std::string word(text_.substr(start, i_ - start));
      if (word == "Level") {
        if (at() != '<') throw SyntaxError(pos, "expected 'Level<'");
        bump();
        return {Tok::LevelLt, "Level<", LevelValue::finite(0), pos};
      }
      if (word == "omega") return omega_tail(word, pos);
      if (word == "fun") return {Tok::Fun, word, LevelValue::finite(0), pos};
      if (word == "Pi") return {Tok::Pi, word, LevelValue::finite(0), pos};
      if (word == "U") return {Tok::Univ, word, LevelValue::finite(0), pos};
      if (word == "Bot") return {Tok::Bot, word, LevelValue::finite(0), pos};
      if (word == "absurd") return {Tok::Absurd, word, LevelValue::finite(0), pos};
      if (word == "def") return {Tok::Def, word, LevelValue::finite(0), pos};
      return {Tok::Ident, word, LevelValue::finite(0), pos};
    }
    throw SyntaxError(pos, std::string("unexpected character '") + c + "'");
  }

  // `omega` optionally followed by `+n` with no spaces.
  Token omega_tail(std::string text, SourcePos pos) {
    if (at() == '+' && std::isdigit(static_cast<unsigned char>(at(1))) != 0) {
      bump();
      std::size_t start = i_;
      while (std::isdigit(static_cast<unsigned char>(at())) != 0) bump();
      text = "omega+" + std::string(text_.substr(start, i_ - start));
    }
    if (ident_char(at())) throw SyntaxError(pos, "malformed level literal");
    return level_literal(text, pos);
  }

  std::string_view text_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view text) { return Lexer(text).run(); }

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier '" + t.text + "'";
    case Tok::Level: return "level '" + t.text + "'";
    case Tok::Pragma: return "pragma '#" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

void Parser::fail(const std::string& message) const { throw SyntaxError(peek().pos, message); }

const Token& Parser::expect(Tok k, const char* what) {
  if (!at(k)) fail(std::string("expected ") + what + ", found " + describe(peek()));
  return advance();
}

SurfacePtr Parser::term() {
  if (at(Tok::Fun) || at(Tok::Pi)) return binder();
  SourcePos pos = peek().pos;
  SurfacePtr lhs = application();
  if (at(Tok::Arrow)) {
    advance();
    return surface::pi("", lhs, term(), pos);
  }
  return lhs;
}

// fun (x y : A) (z : B) . body
SurfacePtr Parser::binder() {
  const Token& kw = advance();
  bool is_pi = kw.kind == Tok::Pi;
  struct Group {
    std::string name;
    SurfacePtr type;
    SourcePos pos;
  };
  std::vector<Group> groups;
  if (!at(Tok::LParen)) fail("expected '(' to open a binder");
  while (at(Tok::LParen)) {
    advance();
    std::vector<std::pair<std::string, SourcePos>> names;
    while (at(Tok::Ident)) {
      const Token& t = advance();
      names.emplace_back(t.text, t.pos);
    }
    if (names.empty()) fail("expected a binder name, found " + describe(peek()));
    expect(Tok::Colon, "':'");
    SurfacePtr type = term();
    expect(Tok::RParen, "')'");
    for (auto& [name, pos] : names) groups.push_back({name, type, pos});
  }
  expect(Tok::Dot, "'.'");
  SurfacePtr body = term();
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    body = is_pi ? surface::pi(it->name, it->type, body, it->pos) : surface::lam(it->name, it->type, body, it->pos);
  }
  return body;
}

bool Parser::starts_atom() const {
  return at(Tok::Ident) || at(Tok::Level) || at(Tok::Bot) || at(Tok::LParen);
}

SurfacePtr Parser::application() {
  SurfacePtr f = head();
  while (starts_atom()) {
    SourcePos pos = peek().pos;
    f = surface::app(f, atom(), pos);
  }
  return f;
}

SurfacePtr Parser::head() {
  SourcePos pos = peek().pos;
  switch (peek().kind) {
    case Tok::Univ:
      advance();
      return surface::univ(atom(), pos);
    case Tok::LevelLt:
      advance();
      return surface::level_lt(atom(), pos);
    case Tok::Absurd: {
      advance();
      if (!at(Tok::LBrack)) fail("absurd needs a type annotation: absurd [T] b");
      advance();
      SurfacePtr ann = term();
      expect(Tok::RBrack, "']'");
      return surface::absurd(ann, atom(), pos);
    }
    default:
      return atom();
  }
}

SurfacePtr Parser::atom() {
  const Token& t = peek();
  SourcePos pos = t.pos;
  switch (t.kind) {
    case Tok::Ident: {
      std::string name = t.text;
      advance();
      return surface::var(name, pos);
    }
    case Tok::Level: {
      LevelValue v = t.level;
      advance();
      return surface::lvl(v, pos);
    }
    case Tok::Bot:
      advance();
      return surface::bot(pos);
    case Tok::LParen: {
      advance();
      SurfacePtr inner = term();
      expect(Tok::RParen, "')'");
      return inner;
    }
    default:
      fail("expected a term, found " + describe(t));
  }
}

}  // namespace detail

SurfacePtr parse_term(std::string_view text) {
  detail::Parser p(detail::lex(text));
  SurfacePtr t = p.term();
  if (!p.at(detail::Tok::End)) p.fail("unexpected " + detail::describe(p.peek()));
  return t;
}

}  // namespace ttbfl::frontend
