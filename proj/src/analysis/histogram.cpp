#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "common.hpp"
#include "kzoom/analysis.hpp"
#include "kzoom/detail/kernels.hpp"

namespace kzoom::analysis {

namespace {

struct SeedHistogram {
  std::vector<std::uint64_t> counts;
  std::string x0;
  std::vector<std::string> log;
};

void validate(const HistogramConfig& c) {
  if (c.seeds == 0 || c.samples == 0 || c.bins == 0) {
    throw Error(ErrorCode::domain, "seeds, samples and bins must be positive");
  }
}

template <class Fill>
SeedHistogram with_retries(const HistogramConfig& c, std::size_t index, Fill&& fill) {
  SeedHistogram out;
  for (int attempt = 0; attempt <= kMaxSeedRetries; ++attempt) {
    out.x0 = detail::attempt_x0(c.master_seed, detail::kStreamHistogram, index, attempt);
    OrbitParams params{Coefficient(c.mu), out.x0, c.k, c.precision, c.order};
    params.validate();
    try {
      out.counts.assign(c.bins, 0);
      fill(params, out.counts);
      return out;
    } catch (const Error& e) {
      if (!detail::is_orbit_failure(e)) throw;
      out.log.push_back("seed " + std::to_string(index) + " redrawn: " + e.what());
    }
  }
  throw Error(ErrorCode::degenerate_orbit, "seed " + std::to_string(index) + " degenerated on every retry");
}

HistogramResult summarize(const HistogramConfig& c, std::vector<SeedHistogram> runs) {
  HistogramResult r;
  r.samples = c.samples;
  r.transient = c.transient;
  r.edges.resize(c.bins + 1);
  for (std::size_t i = 0; i <= c.bins; ++i) r.edges[i] = static_cast<double>(i) / static_cast<double>(c.bins);
  r.mean.assign(c.bins, 0.0);
  r.stddev.assign(c.bins, 0.0);
  const double n = static_cast<double>(runs.size());
  for (const auto& run : runs) {
    for (std::size_t b = 0; b < c.bins; ++b) r.mean[b] += static_cast<double>(run.counts[b]);
  }
  for (auto& m : r.mean) m /= n;
  if (runs.size() > 1) {
    for (const auto& run : runs) {
      for (std::size_t b = 0; b < c.bins; ++b) {
        double d = static_cast<double>(run.counts[b]) - r.mean[b];
        r.stddev[b] += d * d;
      }
    }
    for (auto& s : r.stddev) s = std::sqrt(s / (n - 1.0));
  }
  for (auto& run : runs) {
    r.redraws += run.log.size();
    r.log.insert(r.log.end(), run.log.begin(), run.log.end());
    r.seed_x0.push_back(std::move(run.x0));
    r.seed_counts.push_back(std::move(run.counts));
  }
  return r;
}

}  // namespace

HistogramResult histogram_experiment(const HistogramConfig& c, int threads) {
  validate(c);
  std::vector<SeedHistogram> runs(c.seeds);
  detail::parallel_for(c.seeds, threads, [&](std::size_t i) {
    runs[i] = with_retries(c, i, [&](const OrbitParams& params, std::vector<std::uint64_t>& counts) {
      kzoom::detail::with_orbit_core(params, [&](auto& core) {
        core.skip(c.transient);
        for (std::size_t s = 0; s < c.samples; ++s) {
          core.advance();
          ++counts[core.y_bucket(c.bins)];
        }
      });
    });
  });
  return summarize(c, std::move(runs));
}

namespace reference {

HistogramResult histogram_experiment(const HistogramConfig& c) {
  validate(c);
  std::vector<SeedHistogram> runs;
  for (std::size_t i = 0; i < c.seeds; ++i) {
    runs.push_back(with_retries(c, i, [&](const OrbitParams& params, std::vector<std::uint64_t>& counts) {
      OrbitGenerator gen(params, c.transient);
      for (std::size_t s = 0; s < c.samples; ++s) {
        ++counts[detail::bucket_of(gen.next().y, c.bins)];
      }
    }));
  }
  return summarize(c, std::move(runs));
}

}  // namespace reference

ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) throw Error(ErrorCode::domain, "need at least two bins");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  if (expected < 5.0) {
    throw Error(ErrorCode::expected_too_small, "expected count per bin is " + std::to_string(expected));
  }
  double stat = 0.0;
  for (auto c : counts) {
    double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  ChiSquareResult r;
  r.statistic = stat;
  r.dof = counts.size() - 1;
  r.p_value = stat == 0.0 ? 1.0 : boost::math::gamma_q(static_cast<double>(r.dof) / 2.0, stat / 2.0);
  return r;
}

KsResult ks_against_arcsine(std::span<const double> samples, double threshold) {
  if (samples.empty()) throw Error(ErrorCode::domain, "KS test needs at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  for (double v : sorted) {
    if (!(v > 0.0 && v < 1.0)) throw Error(ErrorCode::domain, "sample outside ]0,1[");
  }
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double f = arcsine_cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return KsResult{d, sorted.size(), threshold, d < threshold};
}

std::vector<double> orbit_samples(const OrbitParams& params, std::size_t n, std::uint64_t transient) {
  params.validate();
  std::vector<double> out;
  out.reserve(n);
  kzoom::detail::with_orbit_core(params, [&](auto& core) {
    core.skip(transient);
    for (std::size_t i = 0; i < n; ++i) {
      core.advance();
      out.push_back(core.y_double());
    }
  });
  return out;
}

}  // namespace kzoom::analysis
