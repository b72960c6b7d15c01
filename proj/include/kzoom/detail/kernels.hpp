#pragma once

// Hot-path logistic backends shared by the orbit generator, the cipher, the
// stream emitter and the analysis kernels. Values are plain doubles or GMP
// integers (units of 10^-P) so inner loops never touch RealValue.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>

#include "kzoom/chaos.hpp"
#include "kzoom/error.hpp"
#include "kzoom/real.hpp"

namespace kzoom::detail {

class Binary64Kernel {
 public:
  using value_type = double;

  Binary64Kernel(const Coefficient& mu, int k, EvalOrder order)
      : mu_(mu.as_double()), scale_(std::pow(10.0, k)), k_(k), order_(order) {}

  value_type parse(const std::string& text) const {
    return RealValue::parse(text, PrecisionSpec::binary64()).as_binary64();
  }
  value_type from(const RealValue& v) const { return v.as_binary64(); }
  RealValue to_value(double v) const { return RealValue::binary64(v); }

  double step(double x) const {
    return order_ == EvalOrder::mu_first ? (mu_ * x) * (1.0 - x) : mu_ * (x * (1.0 - x));
  }
  void step_into(const double& x, double& out) const { out = step(x); }

  bool collapsed(double next, double prev) const { return next <= 0.0 || next >= 1.0 || next == prev; }

  /// Writes the fractional part of x * 10^k; false when it is exactly 0.
  bool zoom(double x, double& y) const {
    if (k_ == 0) {
      y = x;
    } else {
      double v = x * scale_;
      y = v - std::floor(v);
    }
    return y != 0.0;
  }

  double to_double(double v) const { return v; }
  std::uint32_t word32(double y) const { return static_cast<std::uint32_t>(std::ldexp(y, 32)); }
  /// floor(y * n), clamped to n - 1.
  std::size_t bucket(double y, std::size_t n) const {
    auto b = static_cast<std::size_t>(y * static_cast<double>(n));
    return b < n ? b : n - 1;
  }

 private:
  double mu_;
  double scale_;
  int k_;
  EvalOrder order_;
};

class DecimalKernel {
 public:
  using value_type = mpz_class;

  DecimalKernel(const Coefficient& mu, int k, int digits, EvalOrder order)
      : digits_(digits),
        k_(k),
        order_(order),
        one_(pow10(digits)),
        mu_scaled_(mu.scaled()),
        mu_divisor_(pow10(mu.scale())),
        mu_integral_(mu.scale() == 0),
        tail_mod_(pow10(digits - k)),
        shift_(pow10(k)),
        double_divisor_(pow10(digits > 17 ? digits - 17 : 0)),
        double_scale_(digits > 17 ? 1e-17 : std::pow(10.0, -digits)) {}

  value_type parse(const std::string& text) const { return FixedDecimal::parse(text, digits_).units(); }
  value_type from(const RealValue& v) const {
    const auto& d = v.as_decimal();
    if (d.digits() != digits_) throw Error(ErrorCode::domain, "decimal digit count mismatch");
    return d.units();
  }
  RealValue to_value(const mpz_class& v) const { return RealValue::decimal(FixedDecimal(v, digits_)); }

  /// out = step(x); out must not alias x.
  void step_into(const mpz_class& x, mpz_class& out) {
    mpz_sub(b_.get_mpz_t(), one_.get_mpz_t(), x.get_mpz_t());
    if (order_ == EvalOrder::mu_first) {
      mpz_mul(a_.get_mpz_t(), mu_scaled_.get_mpz_t(), x.get_mpz_t());
      if (!mu_integral_) mpz_tdiv_q(a_.get_mpz_t(), a_.get_mpz_t(), mu_divisor_.get_mpz_t());
      mpz_mul(a_.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
      mpz_tdiv_q(out.get_mpz_t(), a_.get_mpz_t(), one_.get_mpz_t());
    } else {
      mpz_mul(a_.get_mpz_t(), x.get_mpz_t(), b_.get_mpz_t());
      mpz_tdiv_q(a_.get_mpz_t(), a_.get_mpz_t(), one_.get_mpz_t());
      mpz_mul(a_.get_mpz_t(), a_.get_mpz_t(), mu_scaled_.get_mpz_t());
      if (mu_integral_) {
        mpz_swap(out.get_mpz_t(), a_.get_mpz_t());
      } else {
        mpz_tdiv_q(out.get_mpz_t(), a_.get_mpz_t(), mu_divisor_.get_mpz_t());
      }
    }
  }

  bool collapsed(const mpz_class& next, const mpz_class& prev) const {
    return sgn(next) <= 0 || cmp(next, one_) >= 0 || next == prev;
  }

  bool zoom(const mpz_class& x, mpz_class& y) const {
    if (k_ == 0) {
      y = x;
    } else {
      mpz_tdiv_r(y.get_mpz_t(), x.get_mpz_t(), tail_mod_.get_mpz_t());
      mpz_mul(y.get_mpz_t(), y.get_mpz_t(), shift_.get_mpz_t());
    }
    return sgn(y) != 0;
  }

  /// Leading 17 digits as a double; deterministic but not correctly rounded.
  double to_double(const mpz_class& v) {
    mpz_tdiv_q(a_.get_mpz_t(), v.get_mpz_t(), double_divisor_.get_mpz_t());
    return mpz_get_d(a_.get_mpz_t()) * double_scale_;
  }

  /// floor(v * 2^32 / 10^P), exact.
  std::uint32_t word32(const mpz_class& v) {
    mpz_mul_2exp(a_.get_mpz_t(), v.get_mpz_t(), 32);
    mpz_tdiv_q(a_.get_mpz_t(), a_.get_mpz_t(), one_.get_mpz_t());
    return static_cast<std::uint32_t>(mpz_get_ui(a_.get_mpz_t()));
  }

  /// floor(v * n / 10^P), exact.
  std::size_t bucket(const mpz_class& v, std::size_t n) {
    mpz_mul_ui(a_.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(n));
    mpz_tdiv_q(a_.get_mpz_t(), a_.get_mpz_t(), one_.get_mpz_t());
    auto b = static_cast<std::size_t>(mpz_get_ui(a_.get_mpz_t()));
    return b < n ? b : n - 1;
  }

  int digits() const { return digits_; }
  const mpz_class& one() const { return one_; }

 private:
  int digits_;
  int k_;
  EvalOrder order_;
  mpz_class one_;
  mpz_class mu_scaled_;
  mpz_class mu_divisor_;
  bool mu_integral_;
  mpz_class tail_mod_;
  mpz_class shift_;
  mpz_class double_divisor_;
  double double_scale_;
  mpz_class a_;
  mpz_class b_;
};

/// Sequential k-logistic state over one backend. `advance()` moves the
/// underlying value and recomputes the zoomed one.
template <class Kernel>
class OrbitCore {
 public:
  using value_type = typename Kernel::value_type;

  OrbitCore(Kernel kernel, value_type x0) : kernel_(std::move(kernel)), x_(std::move(x0)) {}

  void advance() {
    ++t_;
    kernel_.step_into(x_, next_);
    if (kernel_.collapsed(next_, x_)) {
      throw Error(ErrorCode::degenerate_orbit, "orbit collapsed").with_iteration(t_);
    }
    std::swap(x_, next_);
    if (!kernel_.zoom(x_, y_)) {
      throw Error(ErrorCode::zoom_exhausted, "deep-zoomed value has no nonzero digits").with_iteration(t_);
    }
  }

  /// Transient steps: the underlying orbit must not collapse, but the
  /// discarded values are never zoomed.
  void skip(std::uint64_t steps) {
    for (std::uint64_t i = 0; i < steps; ++i) {
      ++t_;
      kernel_.step_into(x_, next_);
      if (kernel_.collapsed(next_, x_)) {
        throw Error(ErrorCode::degenerate_orbit, "orbit collapsed").with_iteration(t_);
      }
      std::swap(x_, next_);
    }
  }

  /// Restarts the underlying orbit from `x` without touching the step count.
  void reset(const value_type& x) { x_ = x; }

  const value_type& x() const { return x_; }
  const value_type& y() const { return y_; }
  std::uint64_t t() const { return t_; }
  Kernel& kernel() { return kernel_; }
  const Kernel& kernel() const { return kernel_; }

  double y_double() { return kernel_.to_double(y_); }
  std::uint32_t y_word32() { return kernel_.word32(y_); }
  std::size_t y_bucket(std::size_t n) { return kernel_.bucket(y_, n); }

 private:
  Kernel kernel_;
  value_type x_;
  value_type next_{};
  value_type y_{};
  std::uint64_t t_ = 0;
};

/// Builds the right OrbitCore for `params` and hands it to `fn`.
template <class Fn>
decltype(auto) with_orbit_core(const OrbitParams& params, Fn&& fn) {
  if (params.precision.is_decimal()) {
    DecimalKernel kernel(params.mu, params.k, params.precision.digits, params.order);
    auto x0 = kernel.parse(params.x0);
    OrbitCore<DecimalKernel> core(std::move(kernel), std::move(x0));
    return fn(core);
  }
  Binary64Kernel kernel(params.mu, params.k, params.order);
  auto x0 = kernel.parse(params.x0);
  OrbitCore<Binary64Kernel> core(std::move(kernel), x0);
  return fn(core);
}

}  // namespace kzoom::detail
