#include "ttbfl/harness/shrink.hpp"

#include "ttbfl/substitution.hpp"

namespace ttbfl::harness {

namespace {

void add_unique(std::vector<Term>& out, const Term& t) {
  for (const Term& u : out) {
    if (alpha_equal(u, t)) return;
  }
  out.push_back(t);
}

}  // namespace

std::vector<Term> shrink_candidates(const Term& t) {
  std::vector<Term> out;
  if (t.size() > 1) {
    add_unique(out, Term::mty());
    add_unique(out, Term::lvl(LevelValue::finite(0)));
  }
  std::size_t n = t.arity();
  for (std::size_t i = 0; i < n; ++i) {
    const Term& c = t.child(i);
    if (!t.binds(i)) {
      add_unique(out, c);
    } else if (auto lowered = unshift(c, 1)) {
      add_unique(out, *lowered);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (const Term& smaller : shrink_candidates(t.child(i))) {
      if (n == 1) {
        add_unique(out, t.with_children(smaller));
      } else if (i == 0) {
        add_unique(out, t.with_children(smaller, t.child(1)));
      } else {
        add_unique(out, t.with_children(t.child(0), smaller));
      }
    }
  }
  return out;
}

Term shrink(const Term& t, const std::function<bool(const Term&)>& fails, std::size_t max_tries) {
  Term current = t;
  std::size_t tries = 0;
  bool progress = true;
  while (progress && tries < max_tries) {
    progress = false;
    for (const Term& c : shrink_candidates(current)) {
      if (c.size() >= current.size()) continue;
      if (++tries > max_tries) break;
      if (fails(c)) {
        current = c;
        progress = true;
        break;
      }
    }
  }
  return current;
}

}  // namespace ttbfl::harness
