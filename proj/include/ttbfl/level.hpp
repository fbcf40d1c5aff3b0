#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ttbfl {

// A concrete universe level. Finite(n) is n; OmegaPlus(n) is omega + n.
// The Nat domain only contains finite values.
class LevelValue {
 public:
  static constexpr LevelValue finite(std::uint64_t n) { return LevelValue(false, n); }
  static constexpr LevelValue omega_plus(std::uint64_t n) { return LevelValue(true, n); }

  constexpr bool is_finite() const { return !limit_; }
  constexpr std::uint64_t offset() const { return offset_; }

  friend constexpr bool operator==(const LevelValue&, const LevelValue&) = default;
  friend constexpr std::strong_ordering operator<=>(const LevelValue& a, const LevelValue& b) {
    if (a.limit_ != b.limit_) return a.limit_ ? std::strong_ordering::greater : std::strong_ordering::less;
    return a.offset_ <=> b.offset_;
  }

  // Literal syntax: decimal digits, `omega`, `omega+n`.
  std::string to_string() const;

 private:
  constexpr LevelValue(bool limit, std::uint64_t offset) : limit_(limit), offset_(offset) {}
  bool limit_;
  std::uint64_t offset_;
};

enum class Ordering { Less, Equal, Greater };

// A cofinal well-ordered set of levels. The kernel is parametrized over one
// instance, selected when a checker is constructed.
class LevelDomain {
 public:
  virtual ~LevelDomain() = default;

  virtual std::string_view name() const = 0;
  virtual bool contains(const LevelValue& v) const = 0;

  virtual bool lt(const LevelValue& a, const LevelValue& b) const = 0;
  // Strictly larger element; throws std::overflow_error past the representable range.
  virtual LevelValue next_above(const LevelValue& a) const = 0;
  // Least element.
  virtual LevelValue bottom() const = 0;

  // Some element strictly below `a`, or nullopt when `a` is minimal. `hint`
  // selects among the candidates when there are infinitely many (below omega).
  virtual std::optional<LevelValue> some_below(const LevelValue& a, std::uint64_t hint) const = 0;

  Ordering compare(const LevelValue& a, const LevelValue& b) const;

  // Parses the literal grammar `0 | [1-9][0-9]* | omega | omega+[1-9][0-9]*`,
  // rejecting values outside this domain.
  std::optional<LevelValue> parse(std::string_view text) const;
};

const LevelDomain& nat_domain();
const LevelDomain& nat_omega_domain();

// "nat" or "nat-omega".
const LevelDomain* domain_by_name(std::string_view name);

}  // namespace ttbfl
