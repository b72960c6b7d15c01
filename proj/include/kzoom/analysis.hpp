#pragma once

// Statistical experiments over k-logistic orbits.
//
// The multi-orbit experiments (histogram, bifurcation grid, battery sweep,
// cipher distribution) run one independent orbit per seed, column or run.
// The versions in kzoom::analysis distribute that outer loop with OpenMP;
// kzoom::analysis::reference holds plain serial implementations written
// against the public orbit/cipher API. Both produce identical results: every
// worker derives its inputs from (master seed, index) and merging is done in
// index order.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kzoom/chaos.hpp"
#include "kzoom/cipher.hpp"
#include "kzoom/prng.hpp"
#include "kzoom/seed.hpp"

namespace kzoom::analysis {

/// Retries allowed per seed when an orbit degenerates.
inline constexpr int kMaxSeedRetries = 10;

// --- frequency distributions ------------------------------------------------

struct HistogramConfig {
  int k = 0;
  std::string mu = "4";
  std::size_t seeds = 100;
  std::size_t samples = 10'000;
  std::size_t bins = 500;
  std::uint64_t transient = 1'000;
  PrecisionSpec precision = PrecisionSpec::binary64();
  EvalOrder order = EvalOrder::mu_first;
  std::uint64_t master_seed = kDefaultMasterSeed;
};

struct HistogramResult {
  std::vector<double> edges;  // bins + 1 values, edges[i] = i / bins
  std::vector<double> mean;
  std::vector<double> stddev;  // sample standard deviation across seeds
  std::vector<std::vector<std::uint64_t>> seed_counts;
  std::vector<std::string> seed_x0;
  std::size_t samples = 0;
  std::uint64_t transient = 0;
  std::size_t redraws = 0;
  std::vector<std::string> log;
};

HistogramResult histogram_experiment(const HistogramConfig& config, int threads = 0);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

/// Pearson statistic against equal expected counts; ExpectedTooSmall when
/// the expected count per bin is below 5.
ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> counts);

struct KsResult {
  double distance = 0.0;
  std::size_t n = 0;
  double threshold = 0.02;
  bool passed = false;
};

/// Kolmogorov-Smirnov distance to F(x) = (2/pi) asin(sqrt x).
KsResult ks_against_arcsine(std::span<const double> samples, double threshold = 0.02);

/// Zoomed values of one orbit as doubles (no retry on degeneration).
std::vector<double> orbit_samples(const OrbitParams& params, std::size_t n, std::uint64_t transient);

// --- bifurcation -------------------------------------------------------------

struct BifurcationConfig {
  std::string mu_lo = "3.6";
  std::string mu_hi = "4";
  std::size_t mu_steps = 400;
  int k = 0;
  std::uint64_t iters = 100'000;  // including the transient
  std::uint64_t transient = 200;
  std::size_t x_bins = 400;
  std::string x0 = "0.232323";
  PrecisionSpec precision = PrecisionSpec::binary64();
  EvalOrder order = EvalOrder::mu_first;
};

struct BifurcationGrid {
  std::vector<std::string> mu;
  std::vector<double> x_edges;
  std::vector<std::vector<std::uint64_t>> density;  // density[mu column][x bin]
  std::vector<bool> degenerate;
  std::uint64_t visits_per_column = 0;

  /// Fraction of x bins visited at least once in column `col`.
  double occupancy(std::size_t col) const;
};

/// Evenly spaced mu values as exact decimal strings (12 fraction digits).
std::vector<std::string> mu_grid(const std::string& lo, const std::string& hi, std::size_t steps);

BifurcationGrid bifurcation_grid(const BifurcationConfig& config, int threads = 0);

// --- return maps ---------------------------------------------------------------

struct ReturnMapConfig {
  int k = 0;
  std::string mu = "4";
  std::size_t n = 10'000;
  std::uint64_t transient = 200;
  int dims = 2;
  std::string x0;  // empty: drawn from `seed`
  std::uint64_t seed = kDefaultMasterSeed;
  PrecisionSpec precision = PrecisionSpec::binary64();
  EvalOrder order = EvalOrder::mu_first;
};

struct ReturnMapData {
  int dims = 2;
  std::vector<double> series;
  std::vector<std::array<double, 2>> pairs;
  std::vector<std::array<double, 3>> triples;
};

ReturnMapData return_map_data(const ReturnMapConfig& config);

/// max |y_{t+1} - f(y_t)| over the pairs, with f evaluated in binary64.
double parabola_deviation(const ReturnMapData& data, const Coefficient& mu, EvalOrder order = EvalOrder::mu_first);

/// Pearson correlation of (z_t, z_{t+lag}).
double lag_autocorrelation(std::span<const double> series, std::size_t lag = 1);

// --- Kac return times ------------------------------------------------------------

struct KacConfig {
  std::string x_min = "0.2";
  std::string x_max = "0.8";
  int sites = 256;
  int site = 104;
  int k = 0;
  std::string mu = "4";
  std::size_t min_returns = 2'000;
  std::uint64_t transient = 1'000;
  std::uint64_t max_iterations = 100'000'000;
  std::string x0;  // empty: drawn from `seed`
  std::uint64_t seed = kDefaultMasterSeed;
  PrecisionSpec precision = PrecisionSpec::binary64();
  EvalOrder order = EvalOrder::mu_first;
};

struct KacReport {
  int site = 0;
  double predicted_measure = 0.0;
  double predicted_mean_return = 0.0;
  double empirical_mean_return = 0.0;
  double relative_error = 0.0;
  std::uint64_t returns = 0;
};

/// Predicted measure: arcsine law for k = 0 (mu must be exactly 4), the
/// plain cell length for k >= 3. k = 1, 2 have no closed form (DomainError).
double kac_predicted_measure(const KacConfig& config);
KacReport kac_report(const KacConfig& config);

// --- ciphertext distribution --------------------------------------------------------

struct CipherDistConfig {
  CipherKey key_template;
  std::vector<int> k_set{0, 4};
  std::size_t plaintexts = 100;
  std::size_t letters = 10'000;
  bool include_baseline = true;
  std::optional<std::string> external_path;
  std::size_t log_bins = 50;
  std::uint64_t master_seed = kDefaultMasterSeed;
};

struct CipherDistResult {
  std::string label;
  std::vector<std::optional<std::uint64_t>> totals;  // per run; empty when excluded
  std::size_t excluded = 0;
  std::vector<double> bin_edges;       // log_bins + 1 edges over [N0 + 1, N_max]
  std::vector<double> mean_histogram;  // mean count per bin over included runs
  std::uint32_t n0 = 0;
  std::uint32_t n_max = 0;

  /// Sum of normalised-histogram absolute differences.
  double l1_distance(const CipherDistResult& other) const;
};

std::vector<double> log_bin_edges(std::uint32_t n0, std::uint32_t n_max, std::size_t bins);
std::size_t log_bin_of(std::uint32_t count, std::uint32_t n0, std::uint32_t n_max, std::size_t bins);

/// One result per source: every k in k_set, then the baseline PRNG, then the
/// external file. Empty when letters == 0.
std::vector<CipherDistResult> cipher_distribution_experiment(const CipherDistConfig& config, int threads = 0);

/// The plaintext used for run `run`.
std::vector<std::uint8_t> experiment_plaintext(std::uint64_t master_seed, std::size_t run, std::size_t letters,
                                               int sites);

// --- randomness battery over seeds ------------------------------------------------------

struct BatterySweepConfig {
  int k = 0;
  std::string mu = "3.99999";
  std::size_t seeds = 20;
  std::uint64_t bits = 1'000'000;
  std::uint64_t transient = 1'000;
  PrecisionSpec precision = PrecisionSpec::decimal();
  EvalOrder order = EvalOrder::mu_first;
  double alpha = kDefaultAlpha;
  std::uint64_t master_seed = kDefaultMasterSeed;
};

struct BatterySweepResult {
  std::vector<std::vector<BatteryReport>> per_seed;  // monobit, runs, block_frequency
  std::size_t redraws = 0;

  std::size_t passes(const std::string& test) const;
  std::vector<BatteryReport> flat() const;
};

BatterySweepResult battery_sweep(const BatterySweepConfig& config, int threads = 0);

// --- serial references ---------------------------------------------------------------------

namespace reference {
HistogramResult histogram_experiment(const HistogramConfig& config);
BifurcationGrid bifurcation_grid(const BifurcationConfig& config);
std::vector<CipherDistResult> cipher_distribution_experiment(const CipherDistConfig& config);
BatterySweepResult battery_sweep(const BatterySweepConfig& config);
}  // namespace reference

// --- export -----------------------------------------------------------------------------------

void write_csv(std::ostream& out, const HistogramResult& r);
void write_csv(std::ostream& out, const BifurcationGrid& r);
void write_csv(std::ostream& out, const ReturnMapData& r);
void write_csv(std::ostream& out, const KacReport& r);
void write_csv(std::ostream& out, std::span<const CipherDistResult> r);
void write_csv(std::ostream& out, const BatterySweepResult& r);
/// 8-bit binary PGM, log-scaled, mu along x and high values at the top.
void write_pgm(std::ostream& out, const BifurcationGrid& grid);

/// Writes write_csv(result) to `path` and returns the byte count.
template <class Result>
std::uint64_t export_csv(const Result& result, const std::string& path);

}  // namespace kzoom::analysis
