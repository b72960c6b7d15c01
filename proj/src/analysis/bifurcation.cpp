#include <algorithm>

#include "common.hpp"
#include "kzoom/analysis.hpp"
#include "kzoom/detail/kernels.hpp"

namespace kzoom::analysis {

namespace {

constexpr int kGridDigits = 12;

std::string trim_decimal(std::string s) {
  if (s.find('.') == std::string::npos) return s;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

void validate(const BifurcationConfig& c) {
  if (c.x_bins == 0) throw Error(ErrorCode::domain, "x_bins must be positive");
  if (c.iters <= c.transient) throw Error(ErrorCode::domain, "iters must exceed the transient");
}

BifurcationGrid empty_grid(const BifurcationConfig& c) {
  BifurcationGrid g;
  g.mu = mu_grid(c.mu_lo, c.mu_hi, c.mu_steps);
  g.x_edges.resize(c.x_bins + 1);
  for (std::size_t i = 0; i <= c.x_bins; ++i) {
    g.x_edges[i] = static_cast<double>(i) / static_cast<double>(c.x_bins);
  }
  g.density.assign(g.mu.size(), std::vector<std::uint64_t>(c.x_bins, 0));
  g.degenerate.assign(g.mu.size(), false);
  g.visits_per_column = c.iters - c.transient;
  for (const auto& mu : g.mu) OrbitParams{Coefficient(mu), c.x0, c.k, c.precision, c.order}.validate();
  return g;
}

}  // namespace

double BifurcationGrid::occupancy(std::size_t col) const {
  const auto& column = density.at(col);
  if (column.empty()) return 0.0;
  auto used = std::count_if(column.begin(), column.end(), [](std::uint64_t v) { return v > 0; });
  return static_cast<double>(used) / static_cast<double>(column.size());
}

std::vector<std::string> mu_grid(const std::string& lo, const std::string& hi, std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::domain, "mu grid needs at least one step");
  auto a = FixedDecimal::parse(lo, kGridDigits).units();
  auto b = FixedDecimal::parse(hi, kGridDigits).units();
  if (a > b) throw Error(ErrorCode::domain, "mu_lo exceeds mu_hi");
  std::vector<std::string> out;
  out.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    mpz_class v = b;
    if (steps > 1 && i + 1 < steps) {
      v = a + (b - a) * static_cast<unsigned long>(i) / static_cast<unsigned long>(steps - 1);
    } else if (steps == 1) {
      v = a;
    }
    out.push_back(trim_decimal(FixedDecimal(v, kGridDigits).to_string()));
  }
  return out;
}

BifurcationGrid bifurcation_grid(const BifurcationConfig& c, int threads) {
  validate(c);
  auto g = empty_grid(c);
  detail::parallel_for(g.mu.size(), threads, [&](std::size_t col) {
    OrbitParams params{Coefficient(g.mu[col]), c.x0, c.k, c.precision, c.order};
    auto& counts = g.density[col];
    try {
      kzoom::detail::with_orbit_core(params, [&](auto& core) {
        core.skip(c.transient);
        for (std::uint64_t i = c.transient; i < c.iters; ++i) {
          core.advance();
          ++counts[core.y_bucket(c.x_bins)];
        }
      });
    } catch (const Error& e) {
      if (!detail::is_orbit_failure(e)) throw;
      std::fill(counts.begin(), counts.end(), 0);
      g.degenerate[col] = true;
    }
  });
  return g;
}

namespace reference {

BifurcationGrid bifurcation_grid(const BifurcationConfig& c) {
  validate(c);
  auto g = empty_grid(c);
  for (std::size_t col = 0; col < g.mu.size(); ++col) {
    OrbitParams params{Coefficient(g.mu[col]), c.x0, c.k, c.precision, c.order};
    std::vector<std::uint64_t> counts(c.x_bins, 0);
    try {
      OrbitGenerator gen(params, c.transient);
      for (std::uint64_t i = c.transient; i < c.iters; ++i) {
        ++counts[detail::bucket_of(gen.next().y, c.x_bins)];
      }
      g.density[col] = std::move(counts);
    } catch (const Error& e) {
      if (!detail::is_orbit_failure(e)) throw;
      g.degenerate[col] = true;
    }
  }
  return g;
}

}  // namespace reference

}  // namespace kzoom::analysis
