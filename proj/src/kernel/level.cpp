#include "ttbfl/level.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>

namespace ttbfl {

std::string LevelValue::to_string() const {
  if (is_finite()) return std::to_string(offset_);
  if (offset_ == 0) return "omega";
  return "omega+" + std::to_string(offset_);
}

Ordering LevelDomain::compare(const LevelValue& a, const LevelValue& b) const {
  if (lt(a, b)) return Ordering::Less;
  if (lt(b, a)) return Ordering::Greater;
  return Ordering::Equal;
}

namespace {

std::optional<std::uint64_t> parse_decimal(std::string_view digits, bool allow_zero) {
  if (digits.empty()) return std::nullopt;
  if (digits.size() > 1 && digits.front() == '0') return std::nullopt;
  if (!allow_zero && digits == "0") return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

std::uint64_t checked_succ(std::uint64_t n) {
  if (n == std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("level offset overflow");
  return n + 1;
}

class NatDomain final : public LevelDomain {
 public:
  std::string_view name() const override { return "nat"; }
  bool contains(const LevelValue& v) const override { return v.is_finite(); }
  bool lt(const LevelValue& a, const LevelValue& b) const override { return a < b; }
  LevelValue next_above(const LevelValue& a) const override {
    return LevelValue::finite(checked_succ(a.offset()));
  }
  LevelValue bottom() const override { return LevelValue::finite(0); }
  std::optional<LevelValue> some_below(const LevelValue& a, std::uint64_t) const override {
    if (a.offset() == 0) return std::nullopt;
    return LevelValue::finite(a.offset() - 1);
  }
};

class NatOmegaDomain final : public LevelDomain {
 public:
  std::string_view name() const override { return "nat-omega"; }
  bool contains(const LevelValue&) const override { return true; }
  bool lt(const LevelValue& a, const LevelValue& b) const override { return a < b; }
  LevelValue next_above(const LevelValue& a) const override {
    std::uint64_t n = checked_succ(a.offset());
    return a.is_finite() ? LevelValue::finite(n) : LevelValue::omega_plus(n);
  }
  LevelValue bottom() const override { return LevelValue::finite(0); }
  std::optional<LevelValue> some_below(const LevelValue& a, std::uint64_t hint) const override {
    if (a.is_finite()) {
      if (a.offset() == 0) return std::nullopt;
      return LevelValue::finite(a.offset() - 1);
    }
    if (a.offset() == 0) return LevelValue::finite(hint);
    return LevelValue::omega_plus(a.offset() - 1);
  }
};

}  // namespace

std::optional<LevelValue> LevelDomain::parse(std::string_view text) const {
  std::optional<LevelValue> value;
  constexpr std::string_view kOmega = "omega";
  if (text == kOmega) {
    value = LevelValue::omega_plus(0);
  } else if (text.starts_with("omega+")) {
    if (auto n = parse_decimal(text.substr(kOmega.size() + 1), false)) value = LevelValue::omega_plus(*n);
  } else if (auto n = parse_decimal(text, true)) {
    value = LevelValue::finite(*n);
  }
  if (value && !contains(*value)) return std::nullopt;
  return value;
}

const LevelDomain& nat_domain() {
  static const NatDomain instance;
  return instance;
}

const LevelDomain& nat_omega_domain() {
  static const NatOmegaDomain instance;
  return instance;
}

const LevelDomain* domain_by_name(std::string_view name) {
  if (name == "nat") return &nat_domain();
  if (name == "nat-omega") return &nat_omega_domain();
  return nullptr;
}

}  // namespace ttbfl
