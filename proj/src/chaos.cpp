#include "kzoom/chaos.hpp"

#include <cmath>
#include <numbers>
#include <variant>

#include "kzoom/detail/kernels.hpp"
#include "kzoom/error.hpp"

namespace kzoom {

std::string_view to_string(EvalOrder order) {
  return order == EvalOrder::mu_first ? "mu-first" : "product-first";
}

EvalOrder parse_eval_order(std::string_view text) {
  if (text == "mu-first") return EvalOrder::mu_first;
  if (text == "product-first") return EvalOrder::product_first;
  throw Error(ErrorCode::parse, "unknown evaluation order '" + std::string(text) + "'");
}

void OrbitParams::validate() const {
  std::string problems;
  auto add = [&](const std::string& p) {
    if (!problems.empty()) problems += "; ";
    problems += p;
  };
  if (cmp(mu.scaled(), mpz_class(pow10(mu.scale()) * 4)) > 0) {
    add("mu must lie in [0,4]");
  }
  try {
    precision.validate();
  } catch (const Error& e) {
    add(e.what());
  }
  if (k < 0) add("k must be non-negative");
  if (precision.is_decimal() && k > precision.digits - PrecisionSpec::kMinDecimalDigits) {
    add("k must not exceed P - " + std::to_string(PrecisionSpec::kMinDecimalDigits));
  }
  if (!is_decimal_literal(x0)) {
    add("x0 is not a decimal literal");
  } else if (problems.empty()) {
    RealValue v = initial_value();
    bool inside = v.is_decimal() ? (sgn(v.as_decimal().units()) > 0 && v.as_decimal().units() < pow10(precision.digits))
                                 : (v.as_binary64() > 0.0 && v.as_binary64() < 1.0);
    if (!inside) add("x0 must lie in ]0,1[");
  }
  if (!problems.empty()) throw Error(ErrorCode::validation, problems);
}

RealValue logistic_step(const RealValue& x, const Coefficient& mu, EvalOrder order) {
  if (x.is_decimal()) {
    const auto& d = x.as_decimal();
    if (cmp(d.units(), pow10(d.digits())) > 0) throw Error(ErrorCode::domain, "x must lie in [0,1]");
    detail::DecimalKernel kernel(mu, 0, d.digits(), order);
    mpz_class out;
    kernel.step_into(d.units(), out);
    return kernel.to_value(out);
  }
  double v = x.as_binary64();
  if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::domain, "x must lie in [0,1]");
  return RealValue::binary64(detail::Binary64Kernel(mu, 0, order).step(v));
}

RealValue deep_zoom(const RealValue& x, int k) {
  if (k < 0) throw Error(ErrorCode::domain, "k must be non-negative");
  if (x.is_decimal()) {
    const auto& d = x.as_decimal();
    if (k > d.digits() - PrecisionSpec::kMinDecimalDigits) {
      throw Error(ErrorCode::domain, "k exceeds P - " + std::to_string(PrecisionSpec::kMinDecimalDigits));
    }
    detail::DecimalKernel kernel(Coefficient("4"), k, d.digits(), EvalOrder::mu_first);
    mpz_class y;
    if (!kernel.zoom(d.units(), y)) throw Error(ErrorCode::zoom_exhausted, "no nonzero digits remain");
    return kernel.to_value(y);
  }
  double y = 0.0;
  if (!detail::Binary64Kernel(Coefficient("4"), k, EvalOrder::mu_first).zoom(x.as_binary64(), y)) {
    throw Error(ErrorCode::zoom_exhausted, "zoomed value is exactly 0");
  }
  return RealValue::binary64(y);
}

struct OrbitGenerator::Impl {
  std::variant<detail::OrbitCore<detail::Binary64Kernel>, detail::OrbitCore<detail::DecimalKernel>> core;
};

OrbitGenerator::OrbitGenerator(const OrbitParams& params, std::uint64_t transient) {
  params.validate();
  detail::with_orbit_core(params, [&](auto& core) {
    core.skip(transient);
    impl_ = std::make_unique<Impl>(Impl{std::move(core)});
  });
}

OrbitGenerator::~OrbitGenerator() = default;
OrbitGenerator::OrbitGenerator(OrbitGenerator&&) noexcept = default;
OrbitGenerator& OrbitGenerator::operator=(OrbitGenerator&&) noexcept = default;

OrbitPoint OrbitGenerator::next() {
  return std::visit(
      [](auto& core) {
        core.advance();
        return OrbitPoint{core.t(), core.kernel().to_value(core.x()), core.kernel().to_value(core.y())};
      },
      impl_->core);
}

std::uint64_t OrbitGenerator::index() const {
  return std::visit([](const auto& core) { return core.t(); }, impl_->core);
}

std::vector<OrbitPoint> orbit(const OrbitParams& params, std::size_t n, std::uint64_t transient) {
  if (n == 0) throw Error(ErrorCode::domain, "orbit length must be at least 1");
  OrbitGenerator gen(params, transient);
  std::vector<OrbitPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen.next());
  return out;
}

double invariant_density(double x) {
  if (!(x > 0.0 && x < 1.0)) throw Error(ErrorCode::domain, "density defined on ]0,1[ only");
  return 1.0 / (std::numbers::pi * std::sqrt(x * (1.0 - x)));
}

double arcsine_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 2.0 / std::numbers::pi * std::asin(std::sqrt(x));
}

double arcsine_measure(double a, double b) {
  if (!(a >= 0.0 && b <= 1.0 && a < b)) throw Error(ErrorCode::domain, "need 0 <= a < b <= 1");
  return arcsine_cdf(b) - arcsine_cdf(a);
}

double lyapunov_time(double lambda, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::domain, "epsilon must lie in ]0,1[");
  if (lambda <= 0.0) throw Error(ErrorCode::domain, "Lyapunov time needs a positive exponent");
  return -std::log(epsilon) / lambda;
}

double LyapunovEstimate::lyapunov_time(double epsilon) const { return kzoom::lyapunov_time(exponent, epsilon); }

LyapunovEstimate lyapunov_estimate(const Coefficient& mu, const std::string& x0, std::uint64_t n,
                                   std::uint64_t transient, PrecisionSpec precision, EvalOrder order) {
  OrbitParams params{mu, x0, 0, precision, order};
  params.validate();
  if (n == 0) throw Error(ErrorCode::domain, "need at least one term");
  const double m = mu.as_double();
  LyapunovEstimate est;
  double sum = 0.0;
  detail::with_orbit_core(params, [&](auto& core) {
    core.skip(transient);
    for (std::uint64_t i = 0; i < n; ++i) {
      core.advance();
      double x = core.kernel().to_double(core.x());
      double d = std::abs(m * (1.0 - 2.0 * x));
      if (d == 0.0) {
        ++est.skipped;
        continue;
      }
      sum += std::log(d);
      ++est.terms;
    }
  });
  est.exponent = est.terms ? sum / static_cast<double>(est.terms) : 0.0;
  return est;
}

}  // namespace kzoom
