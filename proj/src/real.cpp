#include "kzoom/real.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "kzoom/error.hpp"

namespace kzoom {

namespace {

struct SplitLiteral {
  std::string_view integer;
  std::string_view fraction;
};

SplitLiteral split_literal(std::string_view text) {
  if (!is_decimal_literal(text)) {
    throw Error(ErrorCode::parse, "not a plain decimal literal: '" + std::string(text) + "'");
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return {text, {}};
  return {text.substr(0, dot), text.substr(dot + 1)};
}

double parse_double(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::parse, "cannot convert '" + std::string(text) + "' to binary64");
  }
  return v;
}

}  // namespace

void PrecisionSpec::validate() const {
  if (mode == PrecisionMode::decimal && digits < kMinDecimalDigits) {
    throw Error(ErrorCode::validation, "decimal precision needs at least " +
                                           std::to_string(kMinDecimalDigits) + " digits, got " +
                                           std::to_string(digits));
  }
}

std::string PrecisionSpec::to_string() const {
  if (mode == PrecisionMode::binary64) return "binary64";
  return "decimal:" + std::to_string(digits);
}

PrecisionSpec PrecisionSpec::parse(std::string_view text) {
  if (text == "binary64") return binary64();
  if (text == "decimal") return decimal();
  constexpr std::string_view prefix = "decimal:";
  if (text.starts_with(prefix)) {
    auto digits_text = text.substr(prefix.size());
    int p = 0;
    auto [ptr, ec] = std::from_chars(digits_text.data(), digits_text.data() + digits_text.size(), p);
    if (ec != std::errc{} || ptr != digits_text.data() + digits_text.size()) {
      throw Error(ErrorCode::parse, "bad decimal precision '" + std::string(text) + "'");
    }
    PrecisionSpec spec = decimal(p);
    spec.validate();
    return spec;
  }
  throw Error(ErrorCode::parse, "unknown precision '" + std::string(text) + "'");
}

bool is_decimal_literal(std::string_view text) {
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) return false;
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      seen_digit = true;
    } else {
      return false;
    }
  }
  return seen_digit;
}

mpz_class pow10(int n) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(n));
  return r;
}

FixedDecimal::FixedDecimal(mpz_class units, int digits) : units_(std::move(units)), digits_(digits) {
  if (units_ < 0) throw Error(ErrorCode::domain, "fixed decimal must be non-negative");
}

FixedDecimal FixedDecimal::parse(std::string_view text, int digits) {
  auto [integer, fraction] = split_literal(text);
  std::string all(integer);
  if (all.empty()) all = "0";
  std::string frac(fraction.substr(0, std::min<std::size_t>(fraction.size(), digits)));
  frac.append(static_cast<std::size_t>(digits) - frac.size(), '0');
  all += frac;
  return FixedDecimal(mpz_class(all, 10), digits);
}

std::string FixedDecimal::to_string() const {
  std::string s = units_.get_str(10);
  if (static_cast<int>(s.size()) <= digits_) {
    s.insert(0, static_cast<std::size_t>(digits_) + 1 - s.size(), '0');
  }
  if (digits_ > 0) s.insert(s.size() - static_cast<std::size_t>(digits_), 1, '.');
  return s;
}

std::string FixedDecimal::fraction_digits() const {
  std::string s = units_.get_str(10);
  if (static_cast<int>(s.size()) > digits_) {
    throw Error(ErrorCode::domain, "fraction_digits requires a value below 1");
  }
  s.insert(0, static_cast<std::size_t>(digits_) - s.size(), '0');
  return s;
}

double FixedDecimal::to_double() const {
  std::string s = units_.get_str(10) + "e-" + std::to_string(digits_);
  return parse_double(s);
}

bool operator==(const FixedDecimal& a, const FixedDecimal& b) {
  return a.digits_ == b.digits_ && a.units_ == b.units_;
}

std::strong_ordering operator<=>(const FixedDecimal& a, const FixedDecimal& b) {
  int c = 0;
  if (a.digits_ == b.digits_) {
    c = cmp(a.units_, b.units_);
  } else if (a.digits_ < b.digits_) {
    c = cmp(mpz_class(a.units_ * pow10(b.digits_ - a.digits_)), b.units_);
  } else {
    c = cmp(a.units_, mpz_class(b.units_ * pow10(a.digits_ - b.digits_)));
  }
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

RealValue RealValue::parse(std::string_view text, const PrecisionSpec& precision) {
  if (precision.is_decimal()) return decimal(FixedDecimal::parse(text, precision.digits));
  split_literal(text);
  return binary64(parse_double(text));
}

double RealValue::to_double() const {
  if (auto* d = std::get_if<double>(&v_)) return *d;
  return std::get<FixedDecimal>(v_).to_double();
}

std::string RealValue::to_string() const {
  if (auto* d = std::get_if<double>(&v_)) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *d);
    return std::string(buf, ptr);
  }
  return std::get<FixedDecimal>(v_).to_string();
}

std::string RealValue::to_fixed(int fraction_digits) const {
  if (auto* d = std::get_if<double>(&v_)) {
    char buf[512];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *d, std::chars_format::fixed, fraction_digits);
    return std::string(buf, ptr);
  }
  const auto& fd = std::get<FixedDecimal>(v_);
  std::string full = fd.to_string();
  auto dot = full.find('.');
  if (dot == std::string::npos) {
    full += '.';
    dot = full.size() - 1;
  }
  std::string out = full.substr(0, std::min(full.size(), dot + 1 + static_cast<std::size_t>(fraction_digits)));
  out.append(dot + 1 + static_cast<std::size_t>(fraction_digits) - out.size(), '0');
  if (fraction_digits == 0) out.pop_back();
  return out;
}

std::partial_ordering operator<=>(const RealValue& a, const RealValue& b) {
  if (a.mode() != b.mode()) throw Error(ErrorCode::domain, "comparing values of different precision modes");
  if (a.mode() == PrecisionMode::binary64) return a.as_binary64() <=> b.as_binary64();
  return a.as_decimal() <=> b.as_decimal();
}

Coefficient::Coefficient(std::string text) : text_(std::move(text)) {
  auto [integer, fraction] = split_literal(text_);
  value_ = parse_double(text_);
  while (!fraction.empty() && fraction.back() == '0') fraction.remove_suffix(1);
  std::string digits(integer);
  digits += fraction;
  if (digits.empty()) digits = "0";
  scaled_ = mpz_class(digits, 10);
  scale_ = static_cast<int>(fraction.size());
}

}  // namespace kzoom
