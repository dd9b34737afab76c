#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "pcanml/errors.hpp"

namespace pcanml {

/// Quantization step ε, stored exactly as its integer reciprocal N = 1/ε.
///
/// The reduction needs 1/ε to be an integer and ε < 1/m for the loadings
/// dimension m; keeping N instead of ε makes both checks exact.
class GridStep {
 public:
  explicit GridStep(std::int64_t inverse) : inverse_(inverse) {
    if (inverse <= 0) throw DomainError("epsilon: 1/epsilon must be a positive integer");
  }

  /// ε = 1/(2m), valid for every m ≥ 1.
  static GridStep auto_for(std::size_t m) { return GridStep(2 * static_cast<std::int64_t>(m)); }

  /// From a floating-point ε whose reciprocal is an integer up to 1e-9
  /// relative rounding.
  static GridStep from_value(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be positive and finite");
    const double inv = 1.0 / epsilon;
    if (inv > 9.0e15) throw DomainError("epsilon too small");
    const double rounded = std::round(inv);
    if (rounded < 1.0 || std::abs(inv - rounded) > 1e-9 * rounded) {
      throw DomainError("epsilon: 1/epsilon must be an integer, got 1/" + std::to_string(inv));
    }
    return GridStep(static_cast<std::int64_t>(rounded));
  }

  /// Exact parse of "1/N" or a plain decimal such as "0.05" or "2.5e-2".
  /// A decimal p/q is accepted only when q is divisible by p.
  static GridStep parse(std::string_view text) {
    const auto bad = [&](const char* why) {
      return DomainError("epsilon '" + std::string(text) + "': " + why);
    };
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      if (text.substr(0, slash) != "1") throw bad("fraction form must be 1/N");
      const std::int64_t n = parse_digits(text.substr(slash + 1), bad);
      if (n <= 0) throw bad("N must be positive");
      return GridStep(n);
    }

    std::int64_t numerator = 0;
    std::int64_t denominator = 1;
    std::size_t i = 0;
    bool any_digit = false;
    bool after_point = false;
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (c == '.') {
        if (after_point) throw bad("malformed decimal");
        after_point = true;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(c))) break;
      any_digit = true;
      numerator = checked_mul_add(numerator, 10, c - '0', bad);
      if (after_point) denominator = checked_mul_add(denominator, 10, 0, bad);
    }
    if (!any_digit) throw bad("not a number");
    if (i < text.size()) {
      if (text[i] != 'e' && text[i] != 'E') throw bad("unexpected character");
      ++i;
      bool negative = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) negative = text[i++] == '-';
      const std::int64_t exponent = parse_digits(text.substr(i), bad);
      for (std::int64_t e = 0; e < exponent; ++e) {
        if (negative)
          denominator = checked_mul_add(denominator, 10, 0, bad);
        else
          numerator = checked_mul_add(numerator, 10, 0, bad);
      }
    }
    if (numerator == 0) throw bad("must be positive");
    if (denominator % numerator != 0) throw bad("1/epsilon is not an integer");
    return GridStep(denominator / numerator);
  }

  std::int64_t inverse() const noexcept { return inverse_; }
  double value() const noexcept { return 1.0 / static_cast<double>(inverse_); }

  /// ε < 1/m  ⇔  N > m.
  bool valid_for(std::size_t m) const noexcept { return inverse_ > static_cast<std::int64_t>(m); }

  void require_valid_for(std::size_t m) const {
    if (!valid_for(m)) {
      throw DomainError("epsilon=1/" + std::to_string(inverse_) + " is not < 1/m for m=" + std::to_string(m));
    }
  }

  friend bool operator==(const GridStep&, const GridStep&) = default;

 private:
  template <class Bad>
  static std::int64_t checked_mul_add(std::int64_t acc, std::int64_t mul, std::int64_t add, const Bad& bad) {
    if (acc > (std::numeric_limits<std::int64_t>::max() - add) / mul) throw bad("too many digits");
    return acc * mul + add;
  }

  template <class Bad>
  static std::int64_t parse_digits(std::string_view digits, const Bad& bad) {
    if (digits.empty()) throw bad("missing digits");
    std::int64_t out = 0;
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) throw bad("expected digits");
      out = checked_mul_add(out, 10, c - '0', bad);
    }
    return out;
  }

  std::int64_t inverse_;
};

}  // namespace pcanml
