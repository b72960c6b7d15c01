#include <cmath>

#include "common.hpp"
#include "kzoom/analysis.hpp"
#include "kzoom/detail/kernels.hpp"

namespace kzoom::analysis {

ReturnMapData return_map_data(const ReturnMapConfig& c) {
  if (c.dims != 2 && c.dims != 3) throw Error(ErrorCode::domain, "return map dims must be 2 or 3");
  if (c.n < static_cast<std::size_t>(c.dims)) throw Error(ErrorCode::domain, "need at least dims samples");
  std::string x0 = c.x0.empty() ? random_x0(derive_seed(c.seed, detail::kStreamReturnMap, 0)) : c.x0;
  OrbitParams params{Coefficient(c.mu), x0, c.k, c.precision, c.order};
  ReturnMapData d;
  d.dims = c.dims;
  d.series = orbit_samples(params, c.n, c.transient);
  const auto& s = d.series;
  if (c.dims == 2) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) d.pairs.push_back({s[i], s[i + 1]});
  } else {
    for (std::size_t i = 0; i + 2 < s.size(); ++i) d.triples.push_back({s[i], s[i + 1], s[i + 2]});
  }
  return d;
}

double parabola_deviation(const ReturnMapData& data, const Coefficient& mu, EvalOrder order) {
  kzoom::detail::Binary64Kernel f(mu, 0, order);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < data.series.size(); ++i) {
    worst = std::max(worst, std::abs(data.series[i + 1] - f.step(data.series[i])));
  }
  return worst;
}

double lag_autocorrelation(std::span<const double> s, std::size_t lag) {
  if (lag == 0 || s.size() < lag + 2) throw Error(ErrorCode::domain, "series too short for the lag");
  const std::size_t n = s.size() - lag;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += s[i];
    mb += s[i + lag];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = s[i] - ma, b = s[i + lag] - mb;
    sab += a * b;
    saa += a * a;
    sbb += b * b;
  }
  if (saa == 0.0 || sbb == 0.0) throw Error(ErrorCode::zero_variance, "constant series has no correlation");
  return sab / std::sqrt(saa * sbb);
}

double kac_predicted_measure(const KacConfig& c) {
  Partition partition(c.x_min, c.x_max, c.sites, PrecisionSpec::binary64());
  auto [lo, hi] = partition.bounds(c.site);
  if (c.k == 0) {
    Coefficient mu(c.mu);
    if (mu.scaled() != mpz_class(pow10(mu.scale()) * 4)) {
      throw Error(ErrorCode::domain, "closed-form measure at k = 0 needs mu = 4");
    }
    return arcsine_measure(lo.to_double(), hi.to_double());
  }
  if (c.k < 3) {
    throw Error(ErrorCode::domain, "no closed-form site measure for k = " + std::to_string(c.k));
  }
  return hi.to_double() - lo.to_double();
}

KacReport kac_report(const KacConfig& c) {
  if (c.min_returns == 0) throw Error(ErrorCode::domain, "min_returns must be positive");
  KacReport r;
  r.site = c.site;
  r.predicted_measure = kac_predicted_measure(c);
  r.predicted_mean_return = 1.0 / r.predicted_measure;

  std::string x0 = c.x0.empty() ? random_x0(derive_seed(c.seed, detail::kStreamKac, 0)) : c.x0;
  OrbitParams params{Coefficient(c.mu), x0, c.k, c.precision, c.order};
  params.validate();
  Partition partition(c.x_min, c.x_max, c.sites, c.precision);
  std::uint64_t first = 0, last = 0, visits = 0;
  kzoom::detail::with_orbit_core(params, [&](auto& core) {
    core.skip(c.transient);
    for (std::uint64_t t = 1; t <= c.max_iterations && visits <= c.min_returns; ++t) {
      core.advance();
      auto site = partition.site_of(core.y());
      if (site && *site == c.site) {
        if (visits++ == 0) first = t;
        last = t;
      }
    }
  });
  if (visits <= c.min_returns) {
    throw Error(ErrorCode::insufficient_returns, "site " + std::to_string(c.site) + " returned " +
                                                     std::to_string(visits > 0 ? visits - 1 : 0) + " times in " +
                                                     std::to_string(c.max_iterations) + " iterations");
  }
  r.returns = visits - 1;
  r.empirical_mean_return = static_cast<double>(last - first) / static_cast<double>(r.returns);
  r.relative_error = std::abs(r.empirical_mean_return - r.predicted_mean_return) / r.predicted_mean_return;
  return r;
}

}  // namespace kzoom::analysis
