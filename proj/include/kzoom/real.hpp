#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace kzoom {

enum class PrecisionMode { binary64, decimal };

/// Arithmetic backend for orbit generation.
///
/// binary64 is IEEE double with round-to-nearest-even after every
/// multiplication. decimal keeps values as exact fixed-point fractions with
/// `digits` decimal places and truncates toward zero after every
/// multiplication, so results are identical on every platform.
struct PrecisionSpec {
  static constexpr int kMinDecimalDigits = 32;
  static constexpr int kDefaultDecimalDigits = 128;

  PrecisionMode mode = PrecisionMode::binary64;
  int digits = 0;  // decimal mode only

  static PrecisionSpec binary64() { return {PrecisionMode::binary64, 0}; }
  static PrecisionSpec decimal(int p = kDefaultDecimalDigits) { return {PrecisionMode::decimal, p}; }

  bool is_decimal() const { return mode == PrecisionMode::decimal; }
  void validate() const;

  /// "binary64" or "decimal:P".
  std::string to_string() const;
  /// Accepts "binary64", "decimal" (P = 128) and "decimal:P".
  static PrecisionSpec parse(std::string_view text);

  friend bool operator==(const PrecisionSpec&, const PrecisionSpec&) = default;
};

/// Non-negative fixed-point decimal, value = units * 10^-digits.
class FixedDecimal {
 public:
  FixedDecimal() = default;
  FixedDecimal(mpz_class units, int digits);

  /// Parses a plain decimal string ("0.25", "3.8", "4"). Fraction digits past
  /// `digits` are truncated. Signs and exponents are rejected.
  static FixedDecimal parse(std::string_view text, int digits);

  const mpz_class& units() const { return units_; }
  int digits() const { return digits_; }

  /// Full-width rendering: integer part, '.', then exactly `digits` digits.
  std::string to_string() const;
  /// Fraction digits only (no "0." prefix), exactly `digits` characters.
  /// Requires value < 1.
  std::string fraction_digits() const;
  double to_double() const;

  friend bool operator==(const FixedDecimal& a, const FixedDecimal& b);
  friend std::strong_ordering operator<=>(const FixedDecimal& a, const FixedDecimal& b);

 private:
  mpz_class units_ = 0;
  int digits_ = 0;
};

/// 10^n as a GMP integer.
mpz_class pow10(int n);

/// True when `text` is a plain non-negative decimal literal.
bool is_decimal_literal(std::string_view text);

/// A value in [0,1] under one PrecisionSpec.
class RealValue {
 public:
  RealValue() = default;
  static RealValue binary64(double v) { return RealValue(v); }
  static RealValue decimal(FixedDecimal v) { return RealValue(std::move(v)); }
  /// Parses an exact decimal string under `precision`. binary64 uses
  /// correctly rounded conversion.
  static RealValue parse(std::string_view text, const PrecisionSpec& precision);

  PrecisionMode mode() const {
    return std::holds_alternative<double>(v_) ? PrecisionMode::binary64 : PrecisionMode::decimal;
  }
  bool is_decimal() const { return mode() == PrecisionMode::decimal; }

  double as_binary64() const { return std::get<double>(v_); }
  const FixedDecimal& as_decimal() const { return std::get<FixedDecimal>(v_); }

  /// Nearest double (decimal values are converted through their digit string).
  double to_double() const;
  /// binary64: shortest round-trip form. decimal: all P digits.
  std::string to_string() const;
  /// Fixed notation with `fraction_digits` places (decimal: truncated,
  /// binary64: rounded the way printf("%.*f") does).
  std::string to_fixed(int fraction_digits) const;

  friend bool operator==(const RealValue& a, const RealValue& b) = default;
  /// Both operands must share a mode.
  friend std::partial_ordering operator<=>(const RealValue& a, const RealValue& b);

 private:
  explicit RealValue(double v) : v_(v) {}
  explicit RealValue(FixedDecimal v) : v_(std::move(v)) {}
  std::variant<double, FixedDecimal> v_{0.0};
};

/// Map coefficient kept as its exact decimal spelling so a key stays portable
/// across backends ("3.8" has no binary64 representation).
class Coefficient {
 public:
  Coefficient() : Coefficient("4") {}
  explicit Coefficient(std::string text);

  const std::string& text() const { return text_; }
  double as_double() const { return value_; }
  /// mu = scaled() / 10^scale()
  const mpz_class& scaled() const { return scaled_; }
  int scale() const { return scale_; }

  friend bool operator==(const Coefficient& a, const Coefficient& b) { return a.text_ == b.text_; }

 private:
  std::string text_;
  double value_ = 0.0;
  mpz_class scaled_;
  int scale_ = 0;
};

}  // namespace kzoom
