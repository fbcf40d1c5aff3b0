#include "ttbfl/term.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace ttbfl {

namespace {

constexpr bool binds_child(TermKind kind, std::size_t i) {
  return i == 1 && (kind == TermKind::Pi || kind == TermKind::Lam);
}

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::string_view kind_name(TermKind kind) {
  switch (kind) {
    case TermKind::Var: return "Var";
    case TermKind::Lvl: return "Lvl";
    case TermKind::Pi: return "Pi";
    case TermKind::Lam: return "Lam";
    case TermKind::App: return "App";
    case TermKind::Mty: return "Mty";
    case TermKind::Absurd: return "Absurd";
    case TermKind::Univ: return "Univ";
    case TermKind::LevelLt: return "LevelLt";
  }
  return "?";
}

Term Term::make(TermKind kind, std::size_t index, LevelValue level, const Term* c0, const Term* c1) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->index = index;
  node->level = level;
  std::size_t h = mix(static_cast<std::size_t>(kind) * 31 + 7, index);
  if (kind == TermKind::Lvl) {
    h = mix(mix(h, level.is_finite() ? 1 : 2), level.offset());
  }
  if (kind == TermKind::Var) node->free_bound = index + 1;
  const Term* children[2] = {c0, c1};
  for (std::size_t i = 0; i < 2; ++i) {
    if (children[i] == nullptr) break;
    const Node& c = *children[i]->node_;
    node->children[i] = *children[i];
    node->arity = i + 1;
    node->size += c.size;
    std::size_t fb = c.free_bound;
    if (binds_child(kind, i)) fb = fb > 0 ? fb - 1 : 0;
    node->free_bound = std::max(node->free_bound, fb);
    h = mix(h, c.hash);
  }
  node->hash = h;
  return Term(std::move(node));
}

Term Term::var(std::size_t index) { return make(TermKind::Var, index, LevelValue::finite(0), nullptr, nullptr); }
Term Term::lvl(LevelValue level) { return make(TermKind::Lvl, 0, level, nullptr, nullptr); }
Term Term::pi(Term dom, Term cod) { return make(TermKind::Pi, 0, LevelValue::finite(0), &dom, &cod); }
Term Term::lam(Term ann, Term body) { return make(TermKind::Lam, 0, LevelValue::finite(0), &ann, &body); }
Term Term::app(Term fun, Term arg) { return make(TermKind::App, 0, LevelValue::finite(0), &fun, &arg); }
Term Term::mty() {
  static const Term bot = make(TermKind::Mty, 0, LevelValue::finite(0), nullptr, nullptr);
  return bot;
}
Term Term::absurd(Term ann, Term scrut) { return make(TermKind::Absurd, 0, LevelValue::finite(0), &ann, &scrut); }
Term Term::univ(Term level) { return make(TermKind::Univ, 0, LevelValue::finite(0), &level, nullptr); }
Term Term::level_lt(Term bound) { return make(TermKind::LevelLt, 0, LevelValue::finite(0), &bound, nullptr); }

std::size_t Term::index() const {
  if (node_->kind != TermKind::Var) throw std::logic_error("index() on non-variable");
  return node_->index;
}

const LevelValue& Term::level() const {
  if (node_->kind != TermKind::Lvl) throw std::logic_error("level() on non-level literal");
  return node_->level;
}

std::size_t Term::arity() const { return node_->arity; }

const Term& Term::child(std::size_t i) const {
  if (i >= node_->arity) throw std::logic_error("child index out of range");
  return *node_->children[i];
}

bool Term::binds(std::size_t i) const { return binds_child(node_->kind, i); }

Term Term::with_children(Term c0) const {
  if (arity() != 1) throw std::logic_error("with_children arity mismatch");
  if (c0.same_node(*node_->children[0])) return *this;
  return make(kind(), 0, LevelValue::finite(0), &c0, nullptr);
}

Term Term::with_children(Term c0, Term c1) const {
  if (arity() != 2) throw std::logic_error("with_children arity mismatch");
  if (c0.same_node(*node_->children[0]) && c1.same_node(*node_->children[1])) return *this;
  return make(kind(), 0, LevelValue::finite(0), &c0, &c1);
}

bool operator==(const Term& a, const Term& b) { return alpha_equal(a, b); }

std::string Term::debug() const {
  switch (kind()) {
    case TermKind::Var: return "Var " + std::to_string(index());
    case TermKind::Lvl: return "Lvl " + level().to_string();
    case TermKind::Mty: return "Mty";
    default: break;
  }
  std::string out(kind_name(kind()));
  out += '(';
  for (std::size_t i = 0; i < arity(); ++i) {
    if (i) out += ", ";
    out += child(i).debug();
  }
  out += ')';
  return out;
}

bool is_value(const Term& t) {
  switch (t.kind()) {
    case TermKind::Lvl:
    case TermKind::Pi:
    case TermKind::Lam:
    case TermKind::Mty:
    case TermKind::Univ:
    case TermKind::LevelLt:
      return true;
    default:
      return false;
  }
}

bool free_above(const Term& t, std::size_t depth) { return t.free_bound() > depth; }

bool occurs_free(const Term& t, std::size_t index) {
  if (t.free_bound() <= index) return false;
  if (t.is(TermKind::Var)) return t.index() == index;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (occurs_free(t.child(i), t.binds(i) ? index + 1 : index)) return true;
  }
  return false;
}

bool alpha_equal(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  if (a.kind() != b.kind() || a.hash() != b.hash() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case TermKind::Var: return a.index() == b.index();
    case TermKind::Lvl: return a.level() == b.level();
    case TermKind::Mty: return true;
    default: break;
  }
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!alpha_equal(a.child(i), b.child(i))) return false;
  }
  return true;
}

}  // namespace ttbfl
