#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kzoom/real.hpp"

namespace kzoom {

/// Multiplication order for one logistic step.
///
/// mu_first computes (mu * x) * (1 - x); product_first computes
/// mu * (x * (1 - x)). Both round (binary64) or truncate (decimal) after each
/// multiplication. mu_first reproduces the reference ciphertexts.
enum class EvalOrder { mu_first, product_first };

std::string_view to_string(EvalOrder order);
EvalOrder parse_eval_order(std::string_view text);

struct OrbitParams {
  Coefficient mu{"4"};
  std::string x0 = "0.232323";
  int k = 0;
  PrecisionSpec precision = PrecisionSpec::binary64();
  EvalOrder order = EvalOrder::mu_first;

  /// Throws ValidationError naming every violated constraint.
  void validate() const;
  RealValue initial_value() const { return RealValue::parse(x0, precision); }
};

struct OrbitPoint {
  std::uint64_t t = 0;
  RealValue x;  // underlying logistic value
  RealValue y;  // deep-zoomed value
};

/// One logistic step. Does not reject a collapsed result; the orbit
/// generator does that.
RealValue logistic_step(const RealValue& x, const Coefficient& mu, EvalOrder order = EvalOrder::mu_first);

/// Fractional part of x * 10^k. Throws ZoomExhausted when the result is 0.
RealValue deep_zoom(const RealValue& x, int k);

/// Lazy k-logistic orbit. Memory is O(1) in the orbit length; the object owns
/// all of its state and can be moved across threads.
class OrbitGenerator {
 public:
  /// Runs `transient` discarded steps immediately.
  explicit OrbitGenerator(const OrbitParams& params, std::uint64_t transient = 0);
  ~OrbitGenerator();
  OrbitGenerator(OrbitGenerator&&) noexcept;
  OrbitGenerator& operator=(OrbitGenerator&&) noexcept;

  /// Advances one step. The first call returns t = transient + 1.
  /// Throws DegenerateOrbit (state hit 0, 1 or a fixed point) or
  /// ZoomExhausted, both tagged with the iteration index.
  OrbitPoint next();

  std::uint64_t index() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Collects `n` points after `transient` discarded steps.
std::vector<OrbitPoint> orbit(const OrbitParams& params, std::size_t n, std::uint64_t transient = 0);

/// Arcsine density 1 / (pi sqrt(x(1-x))).
double invariant_density(double x);
/// Integral of the arcsine density over [a, b].
double arcsine_measure(double a, double b);
/// (2/pi) asin(sqrt(x)).
double arcsine_cdf(double x);

struct LyapunovEstimate {
  double exponent = 0.0;
  std::uint64_t terms = 0;
  std::uint64_t skipped = 0;  // steps with x exactly 0.5

  /// -ln(epsilon) / exponent
  double lyapunov_time(double epsilon) const;
};

/// Average of ln|mu (1 - 2 x_t)| over n points after the transient.
LyapunovEstimate lyapunov_estimate(const Coefficient& mu, const std::string& x0, std::uint64_t n,
                                   std::uint64_t transient = 1000,
                                   PrecisionSpec precision = PrecisionSpec::binary64(),
                                   EvalOrder order = EvalOrder::mu_first);

double lyapunov_time(double lambda, double epsilon);

}  // namespace kzoom
