#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "ttbfl/level.hpp"

namespace ttbfl {

enum class TermKind : std::uint8_t { Var, Lvl, Pi, Lam, App, Mty, Absurd, Univ, LevelLt };

std::string_view kind_name(TermKind kind);

// Immutable de Bruijn term. Copies share structure.
//
//   Var(i) | Lvl(i) | Pi(dom, cod) | Lam(ann, body) | App(fun, arg)
//   | Mty | Absurd(ann, scrut) | Univ(level) | LevelLt(bound)
//
// `cod` and `body` bind one variable; index 0 refers to that binder.
class Term {
 public:
  static Term var(std::size_t index);
  static Term lvl(LevelValue level);
  static Term pi(Term dom, Term cod);
  static Term lam(Term ann, Term body);
  static Term app(Term fun, Term arg);
  static Term mty();
  static Term absurd(Term ann, Term scrut);
  static Term univ(Term level);
  static Term level_lt(Term bound);

  TermKind kind() const;
  bool is(TermKind k) const { return kind() == k; }

  std::size_t index() const;           // Var
  const LevelValue& level() const;     // Lvl

  // Children in constructor order. arity() is 0, 1 or 2.
  std::size_t arity() const;
  const Term& child(std::size_t i) const;
  // Whether child i sits under the binder of this node.
  bool binds(std::size_t i) const;

  const Term& dom() const { return child(0); }    // Pi
  const Term& cod() const { return child(1); }    // Pi
  const Term& ann() const { return child(0); }    // Lam, Absurd
  const Term& body() const { return child(1); }   // Lam
  const Term& fun() const { return child(0); }    // App
  const Term& arg() const { return child(1); }    // App
  const Term& scrut() const { return child(1); }  // Absurd
  const Term& operand() const { return child(0); }  // Univ, LevelLt

  // Rebuild with the same head and new children.
  Term with_children(Term c0) const;
  Term with_children(Term c0, Term c1) const;

  // Number of nodes.
  std::size_t size() const;
  // One past the largest free index; 0 for closed terms.
  std::size_t free_bound() const;
  std::size_t hash() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b);

  // Constructor-style rendering, e.g. Lam(Mty, Var 0).
  std::string debug() const;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Term make(TermKind kind, std::size_t index, LevelValue level, const Term* c0, const Term* c1);

  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  TermKind kind;
  std::size_t index = 0;
  LevelValue level = LevelValue::finite(0);
  std::size_t arity = 0;
  std::optional<Term> children[2];
  std::size_t size = 1;
  std::size_t free_bound = 0;
  std::size_t hash = 0;
};

inline TermKind Term::kind() const { return node_->kind; }
inline std::size_t Term::size() const { return node_->size; }
inline std::size_t Term::free_bound() const { return node_->free_bound; }
inline std::size_t Term::hash() const { return node_->hash; }

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

bool is_value(const Term& t);

// True iff some free variable index >= depth occurs in t.
bool free_above(const Term& t, std::size_t depth);

// Whether variable `index` (relative to t's root) occurs free in t.
bool occurs_free(const Term& t, std::size_t index);

// Structural equality; de Bruijn makes this alpha-equivalence.
bool alpha_equal(const Term& a, const Term& b);

}  // namespace ttbfl
