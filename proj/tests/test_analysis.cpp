#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "kzoom/analysis.hpp"
#include "test_util.hpp"

namespace kzoom::analysis {
namespace {

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

template <class Result>
std::string csv(const Result& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

HistogramConfig small_histogram(int k) {
  HistogramConfig c;
  c.k = k;
  c.seeds = 8;
  c.samples = 20'000;
  c.bins = 100;
  c.transient = 200;
  return c;
}

// --- histograms ------------------------------------------------------------------------

TEST(Histogram, CountsAreConservedPerSeed) {
  auto r = histogram_experiment(small_histogram(2), 2);
  ASSERT_EQ(r.seed_counts.size(), 8u);
  for (const auto& counts : r.seed_counts) {
    std::uint64_t total = 0;
    for (auto v : counts) total += v;
    EXPECT_EQ(total, 20'000u);
  }
  double mean_total = 0.0;
  for (double m : r.mean) mean_total += m;
  EXPECT_NEAR(mean_total, 20'000.0, 1e-6);
  EXPECT_EQ(r.edges.size(), 101u);
  EXPECT_EQ(r.edges.back(), 1.0);
}

TEST(Histogram, SingleBinHoldsEverything) {
  auto c = small_histogram(0);
  c.bins = 1;
  c.seeds = 3;
  auto r = histogram_experiment(c);
  EXPECT_EQ(r.mean[0], 20'000.0);
  EXPECT_EQ(r.stddev[0], 0.0);
}

TEST(Histogram, ZeroDepthIsUShaped) {
  auto r = histogram_experiment(small_histogram(0));
  const double edge = (r.mean.front() + r.mean.back()) / 2.0;
  const double centre = (r.mean[49] + r.mean[50]) / 2.0;
  EXPECT_GT(edge / centre, 5.0);
}

TEST(Histogram, ZeroDepthBinsFollowArcsineWithinThreeStandardErrors) {
  auto c = small_histogram(0);
  c.seeds = 20;
  auto r = histogram_experiment(c);
  int outside = 0;
  for (std::size_t b = 0; b < r.mean.size(); ++b) {
    const double expected = static_cast<double>(c.samples) * arcsine_measure(r.edges[b], r.edges[b + 1]);
    const double se = r.stddev[b] / std::sqrt(static_cast<double>(c.seeds));
    if (std::abs(r.mean[b] - expected) > 3.0 * se) ++outside;
  }
  EXPECT_LE(outside, 3);
}

TEST(Histogram, DeepZoomIsFlat) {
  auto r = histogram_experiment(small_histogram(4));
  int uniform = 0;
  for (const auto& counts : r.seed_counts) {
    if (chi_square_uniform(counts).p_value >= 0.01) ++uniform;
  }
  EXPECT_GE(uniform, 7);
  const auto [lo, hi] = std::minmax_element(r.mean.begin(), r.mean.end());
  EXPECT_LT(*hi / *lo, 1.3);
}

TEST(Histogram, DecimalBackendAgreesInShape) {
  auto c = small_histogram(0);
  c.seeds = 2;
  c.samples = 5'000;
  c.precision = PrecisionSpec::decimal(64);
  auto r = histogram_experiment(c);
  EXPECT_GT(r.mean.front(), 4.0 * r.mean[50]);
}

TEST(Histogram, RejectsEmptyConfigurations) {
  auto c = small_histogram(0);
  c.bins = 0;
  EXPECT_KZOOM_ERROR(histogram_experiment(c), ErrorCode::domain);
  c = small_histogram(0);
  c.seeds = 0;
  EXPECT_KZOOM_ERROR(histogram_experiment(c), ErrorCode::domain);
  c = small_histogram(0);
  c.mu = "4.5";
  EXPECT_KZOOM_ERROR(histogram_experiment(c), ErrorCode::validation);
}

TEST(Histogram, DegenerateSeedsExhaustRetries) {
  auto c = small_histogram(0);
  c.mu = "2";
  c.precision = PrecisionSpec::decimal(32);
  c.seeds = 1;
  c.transient = 5'000;
  EXPECT_KZOOM_ERROR(histogram_experiment(c), ErrorCode::degenerate_orbit);
}

// --- goodness of fit ----------------------------------------------------------------------------

TEST(ChiSquare, ReferenceValues) {
  std::vector<std::uint64_t> flat(10, 50);
  auto r = chi_square_uniform(flat);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.dof, 9u);
  // (10^2 + 10^2) / 50 = 4 on 1 dof: p = erfc(sqrt 2).
  std::vector<std::uint64_t> pair{60, 40};
  r = chi_square_uniform(pair);
  EXPECT_DOUBLE_EQ(r.statistic, 4.0);
  EXPECT_NEAR(r.p_value, std::erfc(std::sqrt(2.0)), 1e-12);
}

TEST(ChiSquare, SmallExpectedCountsAreRejected) {
  std::vector<std::uint64_t> sparse(10, 4);
  EXPECT_KZOOM_ERROR(chi_square_uniform(sparse), ErrorCode::expected_too_small);
  std::vector<std::uint64_t> one{100};
  EXPECT_KZOOM_ERROR(chi_square_uniform(one), ErrorCode::domain);
}

TEST(KsArcsine, InverseTransformSamplesPass) {
  std::mt19937_64 rng(4);
  std::vector<double> samples(100'000);
  for (auto& s : samples) {
    double u = unit_double(rng());
    s = std::pow(std::sin(std::numbers::pi * u / 2.0), 2.0);
    if (s <= 0.0 || s >= 1.0) s = 0.5;
  }
  auto r = ks_against_arcsine(samples);
  EXPECT_LT(r.distance, 0.005);
  EXPECT_TRUE(r.passed);
}

TEST(KsArcsine, UniformSamplesFail) {
  std::mt19937_64 rng(4);
  std::vector<double> samples(10'000);
  for (auto& s : samples) s = (unit_double(rng()) + 1e-9) / (1.0 + 2e-9);
  EXPECT_FALSE(ks_against_arcsine(samples).passed);
}

TEST(KsArcsine, ZeroDepthOrbitPasses) {
  OrbitParams p{Coefficient("4"), "0.232323", 0, PrecisionSpec::binary64()};
  auto samples = orbit_samples(p, 100'000, 1'000);
  EXPECT_LT(ks_against_arcsine(samples).distance, 0.02);
}

TEST(KsArcsine, InvalidInput) {
  std::vector<double> empty;
  EXPECT_KZOOM_ERROR(ks_against_arcsine(empty), ErrorCode::domain);
  std::vector<double> bad{0.5, 1.0};
  EXPECT_KZOOM_ERROR(ks_against_arcsine(bad), ErrorCode::domain);
}

// --- bifurcation -------------------------------------------------------------------------------------

TEST(Bifurcation, MuGridIsExactDecimal) {
  auto g = mu_grid("3.6", "4", 5);
  EXPECT_EQ(g, (std::vector<std::string>{"3.6", "3.7", "3.8", "3.9", "4"}));
  EXPECT_EQ(mu_grid("3.5", "3.9", 1), std::vector<std::string>{"3.5"});
  EXPECT_EQ(mu_grid("3", "4", 4)[1], "3.333333333333");
  EXPECT_KZOOM_ERROR(mu_grid("4", "3", 2), ErrorCode::domain);
  EXPECT_KZOOM_ERROR(mu_grid("3", "4", 0), ErrorCode::domain);
}

TEST(Bifurcation, PeriodTwoOccupiesTwoBins) {
  BifurcationConfig c;
  c.mu_lo = c.mu_hi = "3.2";
  c.mu_steps = 1;
  c.iters = 5'000;
  c.transient = 1'000;
  c.x_bins = 100;
  auto g = bifurcation_grid(c);
  auto used = std::count_if(g.density[0].begin(), g.density[0].end(), [](auto v) { return v > 0; });
  EXPECT_EQ(used, 2);
  EXPECT_DOUBLE_EQ(g.occupancy(0), 0.02);
  EXPECT_EQ(g.visits_per_column, 4'000u);
}

TEST(Bifurcation, OccupancyGrowsWithDepth) {
  BifurcationConfig c;
  c.mu_lo = "3.5";
  c.mu_hi = "3.9";
  c.mu_steps = 9;
  c.iters = 4'000;
  c.x_bins = 200;
  auto mean_occupancy = [&](int k) {
    c.k = k;
    auto g = bifurcation_grid(c);
    double s = 0.0;
    for (std::size_t i = 0; i < g.mu.size(); ++i) s += g.occupancy(i);
    return s / static_cast<double>(g.mu.size());
  };
  const double k0 = mean_occupancy(0), k2 = mean_occupancy(2), k4 = mean_occupancy(4);
  EXPECT_LT(k0, k2);
  EXPECT_LE(k2, k4);
  // Periodic windows stay periodic under zooming, so k = 4 does not reach full occupancy.
  EXPECT_GT(k4, 0.5);
}

TEST(Bifurcation, DegenerateColumnsAreFlaggedAndEmpty) {
  BifurcationConfig c;
  c.mu_lo = "2";
  c.mu_hi = "3.9";
  c.mu_steps = 2;
  c.iters = 3'000;
  c.x_bins = 50;
  c.x0 = "0.25";
  c.precision = PrecisionSpec::decimal(32);
  auto g = bifurcation_grid(c);
  EXPECT_TRUE(g.degenerate[0]);
  EXPECT_FALSE(g.degenerate[1]);
  EXPECT_EQ(g.occupancy(0), 0.0);
  EXPECT_NE(csv(g).find("\n2,,,,0,1\n"), std::string::npos);
}

TEST(Bifurcation, Validation) {
  BifurcationConfig c;
  c.iters = c.transient;
  EXPECT_KZOOM_ERROR(bifurcation_grid(c), ErrorCode::domain);
  c = BifurcationConfig{};
  c.x_bins = 0;
  EXPECT_KZOOM_ERROR(bifurcation_grid(c), ErrorCode::domain);
  c = BifurcationConfig{};
  c.mu_hi = "4.1";
  EXPECT_KZOOM_ERROR(bifurcation_grid(c), ErrorCode::validation);
}

// --- return maps -----------------------------------------------------------------------------------------

TEST(ReturnMap, ZeroDepthPairsLieOnTheParabola) {
  ReturnMapConfig c;
  c.seed = 11;
  auto d = return_map_data(c);
  EXPECT_EQ(d.series.size(), 10'000u);
  EXPECT_EQ(d.pairs.size(), 9'999u);
  EXPECT_EQ(parabola_deviation(d, Coefficient("4")), 0.0);
}

TEST(ReturnMap, FirstZoomLeavesTheParabola) {
  ReturnMapConfig c;
  c.k = 1;
  c.seed = 11;
  EXPECT_GT(parabola_deviation(return_map_data(c), Coefficient("4")), 0.1);
}

TEST(ReturnMap, DeepZoomDecorrelates) {
  for (int k : {3, 4}) {
    ReturnMapConfig c;
    c.k = k;
    c.seed = 11;
    auto d = return_map_data(c);
    EXPECT_LT(std::abs(lag_autocorrelation(d.series)), 0.05) << k;
  }
}

TEST(ReturnMap, DecorrelationImprovesWithDepthAtMuThreeEight) {
  std::vector<double> rho;
  for (int k = 0; k <= 3; ++k) {
    ReturnMapConfig c;
    c.k = k;
    c.mu = "3.8";
    c.n = 20'000;
    c.seed = 3;
    rho.push_back(std::abs(lag_autocorrelation(return_map_data(c).series)));
  }
  EXPECT_GT(rho[0], 0.3);
  EXPECT_GT(rho[0], rho[1]);
  EXPECT_LT(rho[3], 0.05);
}

TEST(ReturnMap, TriplesAndValidation) {
  ReturnMapConfig c;
  c.dims = 3;
  c.n = 50;
  c.x0 = "0.3";
  auto d = return_map_data(c);
  EXPECT_EQ(d.triples.size(), 48u);
  EXPECT_TRUE(d.pairs.empty());
  EXPECT_EQ(line_count(csv(d)), 49u);
  EXPECT_EQ(csv(d).substr(0, 15), "t,z_t,z_t1,z_t2");
  c.dims = 4;
  EXPECT_KZOOM_ERROR(return_map_data(c), ErrorCode::domain);
}

TEST(LagAutocorrelation, ReferenceSeries) {
  std::vector<double> ramp(100);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
  EXPECT_NEAR(lag_autocorrelation(ramp), 1.0, 1e-12);
  std::vector<double> alternating(100);
  for (std::size_t i = 0; i < alternating.size(); ++i) alternating[i] = i % 2 ? 1.0 : -1.0;
  EXPECT_NEAR(lag_autocorrelation(alternating), -1.0, 1e-12);
  EXPECT_NEAR(lag_autocorrelation(alternating, 2), 1.0, 1e-12);
  std::vector<double> constant(10, 0.5);
  EXPECT_KZOOM_ERROR(lag_autocorrelation(constant), ErrorCode::zero_variance);
  EXPECT_KZOOM_ERROR(lag_autocorrelation(ramp, 0), ErrorCode::domain);
  EXPECT_KZOOM_ERROR(lag_autocorrelation(std::vector<double>{1.0, 2.0}), ErrorCode::domain);
}

// --- Kac ------------------------------------------------------------------------------------------------------

TEST(Kac, PredictedMeasures) {
  KacConfig c;
  EXPECT_NEAR(1.0 / kac_predicted_measure(c), 665.77, 0.01);
  c.k = 4;
  EXPECT_NEAR(1.0 / kac_predicted_measure(c), 426.6667, 1e-3);
  c.k = 1;
  EXPECT_KZOOM_ERROR(kac_predicted_measure(c), ErrorCode::domain);
  c.k = 0;
  c.mu = "3.99";
  EXPECT_KZOOM_ERROR(kac_predicted_measure(c), ErrorCode::domain);
  c.mu = "4.000";
  EXPECT_NO_THROW(kac_predicted_measure(c));
}

TEST(Kac, EmpiricalMeansMatchPrediction) {
  for (int k : {0, 4}) {
    KacConfig c;
    c.k = k;
    auto r = kac_report(c);
    EXPECT_GE(r.returns, 2'000u);
    EXPECT_LT(r.relative_error, 0.10) << k;
    EXPECT_EQ(line_count(csv(r)), 2u);
  }
}

TEST(Kac, WholeIntervalReturnsEveryStep) {
  KacConfig c;
  c.x_min = "0";
  c.x_max = "1";
  c.sites = 1;
  c.site = 1;
  c.k = 3;
  c.min_returns = 500;
  auto r = kac_report(c);
  EXPECT_EQ(r.predicted_mean_return, 1.0);
  EXPECT_EQ(r.empirical_mean_return, 1.0);
  EXPECT_EQ(r.relative_error, 0.0);
}

TEST(Kac, InsufficientReturns) {
  KacConfig c;
  c.k = 4;
  c.max_iterations = 1'000;
  EXPECT_KZOOM_ERROR(kac_report(c), ErrorCode::insufficient_returns);
}

// --- ciphertext distributions -----------------------------------------------------------------------------------

CipherDistConfig small_dist() {
  CipherDistConfig c;
  c.key_template = keygen(9);
  c.key_template.precision = PrecisionSpec::binary64();
  c.plaintexts = 4;
  c.letters = 100;
  return c;
}

TEST(LogBins, EdgesAndAssignment) {
  auto edges = log_bin_edges(250, 65532, 50);
  EXPECT_EQ(edges.size(), 51u);
  EXPECT_EQ(edges.front(), 251.0);
  EXPECT_EQ(edges.back(), 65532.0);
  EXPECT_EQ(log_bin_of(251, 250, 65532, 50), 0u);
  EXPECT_EQ(log_bin_of(65532, 250, 65532, 50), 49u);
  for (std::uint32_t n : {300u, 1000u, 5000u, 40000u}) {
    auto b = log_bin_of(n, 250, 65532, 50);
    EXPECT_LE(edges[b], n);
    EXPECT_LT(n, edges[b + 1]);
  }
  EXPECT_KZOOM_ERROR(log_bin_of(250, 250, 65532, 50), ErrorCode::domain);
  EXPECT_KZOOM_ERROR(log_bin_edges(250, 251, 50), ErrorCode::domain);
}

TEST(CipherDist, SourcesAndLabels) {
  auto results = cipher_distribution_experiment(small_dist(), 2);
  ASSERT_EQ(results.size(), 3u);
  EXPECT_EQ(results[0].label, "k=0");
  EXPECT_EQ(results[1].label, "k=4");
  EXPECT_EQ(results[2].label, "baseline:mt19937_64");
  for (const auto& r : results) {
    EXPECT_EQ(r.totals.size(), 4u);
    EXPECT_EQ(r.excluded, 0u);
    double letters = 0.0;
    for (double v : r.mean_histogram) letters += v;
    EXPECT_NEAR(letters, 100.0, 1e-9);
    for (const auto& t : r.totals) EXPECT_GT(*t, 100u * 250u);
  }
  EXPECT_EQ(line_count(csv(std::span<const CipherDistResult>(results))), 1u + 3u * (50u + 4u));
}

TEST(CipherDist, NoLettersMeansNoResults) {
  auto c = small_dist();
  c.letters = 0;
  EXPECT_TRUE(cipher_distribution_experiment(c).empty());
}

TEST(CipherDist, PlaintextsAreDeterministicAndInAlphabet) {
  EXPECT_EQ(experiment_plaintext(1, 3, 64, 256), experiment_plaintext(1, 3, 64, 256));
  EXPECT_NE(experiment_plaintext(1, 3, 64, 256), experiment_plaintext(1, 4, 64, 256));
  for (auto b : experiment_plaintext(1, 0, 500, 10)) EXPECT_LT(b, 10);
}

TEST(CipherDist, ExhaustedRunsAreExcluded) {
  auto c = small_dist();
  c.key_template.n_max = 300;
  c.include_baseline = false;
  c.k_set = {4};
  auto results = cipher_distribution_experiment(c);
  EXPECT_EQ(results[0].excluded, 4u);
  EXPECT_FALSE(results[0].totals[0].has_value());
}

TEST(CipherDist, DeepZoomApproachesAnExternalRandomSource) {
  auto dir = test::scratch_dir();
  std::mt19937_64 rng(99);
  std::string data(4 << 20, '\0');
  for (auto& ch : data) ch = static_cast<char>(rng());
  test::spit(dir / "random.bin", data);

  auto c = small_dist();
  c.key_template.precision = PrecisionSpec::decimal(64);
  c.k_set = {0, 9};
  c.plaintexts = 2;
  c.letters = 500;
  c.include_baseline = false;
  c.external_path = (dir / "random.bin").string();
  auto results = cipher_distribution_experiment(c);
  ASSERT_EQ(results.size(), 3u);
  EXPECT_EQ(results[2].label, "external:random.bin");
  EXPECT_LT(results[1].l1_distance(results[2]), results[0].l1_distance(results[2]));
  EXPECT_EQ(results[2].l1_distance(results[2]), 0.0);
}

TEST(CipherDist, ShortExternalFileIsAnError) {
  auto dir = test::scratch_dir();
  test::spit(dir / "tiny.bin", std::string(64, '\x42'));
  auto c = small_dist();
  c.external_path = (dir / "tiny.bin").string();
  EXPECT_KZOOM_ERROR(cipher_distribution_experiment(c), ErrorCode::external_file_exhausted);
}

// --- battery sweep -------------------------------------------------------------------------------------------------

TEST(BatterySweep, SmallScaleTrend) {
  BatterySweepConfig c;
  c.seeds = 3;
  c.bits = 64'000;
  c.precision = PrecisionSpec::decimal(64);
  c.k = 0;
  auto k0 = battery_sweep(c, 2);
  c.k = 5;
  auto k5 = battery_sweep(c, 2);
  EXPECT_EQ(k0.per_seed.size(), 3u);
  EXPECT_EQ(k0.passes("runs"), 0u);
  EXPECT_EQ(k5.passes("runs"), 3u);
  EXPECT_EQ(k5.flat().size(), 9u);
  EXPECT_EQ(k5.flat()[0].name, "k=5 seed=0");
  EXPECT_EQ(line_count(csv(k5)), 10u);
}

TEST(BatterySweep, TooFewBitsIsRejected) {
  BatterySweepConfig c;
  c.bits = 1'000;
  EXPECT_KZOOM_ERROR(battery_sweep(c), ErrorCode::too_few_bits);
}

// --- export ----------------------------------------------------------------------------------------------------------

TEST(Export, HistogramCsvLayoutAndReexport) {
  auto c = small_histogram(1);
  c.seeds = 2;
  c.bins = 20;
  auto r = histogram_experiment(c);
  auto dir = test::scratch_dir();
  auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  auto bytes = export_csv(r, a);
  EXPECT_EQ(export_csv(r, b), bytes);
  const std::string text = test::slurp(a);
  EXPECT_EQ(text, test::slurp(b));
  EXPECT_EQ(text.size(), bytes);
  EXPECT_EQ(line_count(text), 21u);
  EXPECT_EQ(text.substr(0, text.find('\n')), "bin,x_lo,x_hi,mean,stddev");
}

TEST(Export, UnwritablePathIsIoError) {
  EXPECT_KZOOM_ERROR(export_csv(KacReport{}, "/nonexistent/dir/kac.csv"), ErrorCode::io);
}

TEST(Export, PgmHeaderAndOrientation) {
  BifurcationGrid g;
  g.mu = {"3", "4"};
  g.x_edges = {0.0, 0.5, 1.0};
  g.density = {{10, 0}, {0, 10}};
  g.degenerate = {false, false};
  std::ostringstream out;
  write_pgm(out, g);
  // Top row is the high bin: column 1 lit, column 0 dark.
  EXPECT_EQ(out.str(), std::string("P5\n2 2\n255\n\x00\xff\xff\x00", 15));
}

}  // namespace
}  // namespace kzoom::analysis
