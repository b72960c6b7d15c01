#include "cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kzoom/analysis.hpp"
#include "kzoom/cipher.hpp"
#include "kzoom/detail/format.hpp"
#include "kzoom/error.hpp"
#include "kzoom/prng.hpp"

namespace kzoom::cli {

namespace fs = std::filesystem;
using detail::fmt_double;

namespace {

constexpr std::uint64_t kStreamGenX0 = 0x4745;

// --- shared state filled by CLI11 ---------------------------------------------------

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string precision;
  bool paper_scale = false;
};

struct KeyFlags {
  std::string mu, x0, x_min, x_max, eta, order, chain, association;
  int k = 0, sites = 0;
  std::uint32_t n0 = 0, n_max = 0;
};

struct Files {
  std::string key, in, out, format = "text", out_dir = ".";
  std::uint64_t aux_seed = 0;
};

struct OrbitFlags {
  std::string mu = "3.99999", x0, order = "mu-first", byte_order = "little";
  int k = 0;
  std::uint64_t words = 2'800'000, transient = 1'000;
};

struct AnalyzeFlags {
  int k = 0;
  std::string mu;
  std::optional<std::size_t> seeds, samples, letters, plaintexts, min_returns;
  std::optional<std::uint64_t> bits, iters;
  std::size_t bins = 500, x_bins = 400, steps = 400, n = 10'000, log_bins = 50;
  std::uint64_t transient = 1'000;
  std::string mu_lo = "3.6", mu_hi = "4", x0, x_min = "0.2", x_max = "0.8", k_set = "0,4", external, order = "mu-first";
  int dims = 2, site = 104, sites = 256;
  double alpha = kDefaultAlpha;
  bool no_baseline = false;
  bool assert_ok = false;
};

// --- helpers ----------------------------------------------------------------------------

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::degenerate_orbit:
    case ErrorCode::zoom_exhausted:
    case ErrorCode::return_exhausted:
    case ErrorCode::external_file_exhausted:
      return kGeneration;
    case ErrorCode::invalid_ciphertext:
      return kCiphertext;
    default:
      return kConfig;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_out(const std::string& path, const std::vector<std::string>& inputs) {
  for (const auto& in : inputs) {
    std::error_code ec;
    if (!in.empty() && fs::exists(path) && fs::equivalent(path, in, ec)) {
      throw Error(ErrorCode::io, "refusing to overwrite input file '" + in + "'");
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  return out;
}

CipherKey load_key(const std::string& path, const Globals& g) {
  CipherKey key = key_parse(read_file(path));
  if (!g.precision.empty()) {
    key.precision = PrecisionSpec::parse(g.precision);
    key.validate();
  }
  return key;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || p != item.data() + item.size()) {
      throw Error(ErrorCode::validation, "bad integer list '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string path_in(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

template <class T>
T scaled(const std::optional<T>& flag, bool paper, T desk, T full) {
  return flag ? *flag : (paper ? full : desk);
}

// --- commands --------------------------------------------------------------------------------

int cmd_keygen(const Globals& g, const KeyFlags& f, CLI::App& sub, const Files& files, std::ostream& out) {
  KeyOverrides o;
  auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
  if (given("--mu")) o.mu = f.mu;
  if (given("--x0")) o.x0 = f.x0;
  if (given("--k")) o.k = f.k;
  if (given("--sites")) o.sites = f.sites;
  if (given("--x-min")) o.x_min = f.x_min;
  if (given("--x-max")) o.x_max = f.x_max;
  if (given("--n0")) o.n0 = f.n0;
  if (given("--n-max")) o.n_max = f.n_max;
  if (given("--eta")) o.eta = f.eta;
  if (given("--order")) o.order = parse_eval_order(f.order);
  if (given("--chain")) o.chain = parse_chain_mode(f.chain);
  if (!g.precision.empty()) o.precision = PrecisionSpec::parse(g.precision);
  if (f.association == "ascii") {
    o.association = ascii_association(given("--sites") ? f.sites : CipherKey{}.sites);
  } else if (f.association != "shuffled") {
    throw Error(ErrorCode::validation, "--association must be 'shuffled' or 'ascii'");
  }
  CipherKey key = keygen(g.seed, o);
  auto file = open_out(files.out, {});
  file << key_serialize(key);
  if (!file.flush()) throw Error(ErrorCode::io, "failed writing '" + files.out + "'");
  out << key_fingerprint(key) << '\n';
  return kOk;
}

int cmd_encrypt(const Globals& g, const Files& f, std::ostream& out) {
  CipherKey key = load_key(f.key, g);
  std::string plain = read_file(f.in);
  CiphertextFormat format = f.format == "bin" ? CiphertextFormat::binary : CiphertextFormat::text;
  if (f.format != "bin" && f.format != "text") throw Error(ErrorCode::validation, "--format must be text or bin");
  std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(plain.data()), plain.size());
  Ciphertext ct = encrypt(bytes, key, f.aux_seed);
  auto file = open_out(f.out, {f.in, f.key});
  write_ciphertext(file, ct, format);
  out << "encrypted " << ct.counts.size() << " units\n";
  return kOk;
}

int cmd_decrypt(const Globals& g, const Files& f, std::ostream& out) {
  CipherKey key = load_key(f.key, g);
  std::ifstream in(f.in, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read '" + f.in + "'");
  Ciphertext ct = read_ciphertext(in);
  auto plain = decrypt(ct, key);
  auto file = open_out(f.out, {f.in, f.key});
  file.write(reinterpret_cast<const char*>(plain.data()), static_cast<std::streamsize>(plain.size()));
  if (!file.flush()) throw Error(ErrorCode::io, "failed writing '" + f.out + "'");
  out << "decrypted " << plain.size() << " bytes\n";
  return kOk;
}

int cmd_gen(const Globals& g, const OrbitFlags& f, CLI::App& sub, const Files& files, std::ostream& out) {
  auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
  OrbitParams params;
  if (!files.key.empty()) {
    params = load_key(files.key, g).orbit_params();
  } else {
    params.precision = PrecisionSpec::decimal();
    params.x0 = random_x0(derive_seed(g.seed, kStreamGenX0, 0));
  }
  if (files.key.empty() || given("--mu")) params.mu = Coefficient(f.mu);
  if (files.key.empty() || given("--k")) params.k = f.k;
  if (files.key.empty() || given("--order")) params.order = parse_eval_order(f.order);
  if (given("--x0")) params.x0 = f.x0;
  if (!g.precision.empty()) params.precision = PrecisionSpec::parse(g.precision);
  StreamConfig cfg{params, f.transient, f.words, parse_byte_order(f.byte_order)};
  cfg.validate();

  std::uint64_t bytes = 0;
  {
    auto file = open_out(files.out, {files.key});
    try {
      bytes = generate_stream(cfg, file);
      if (!file.flush()) throw Error(ErrorCode::io, "failed writing '" + files.out + "'");
    } catch (...) {
      file.close();
      std::error_code ec;
      fs::remove(files.out, ec);
      throw;
    }
  }
  out << "wrote " << bytes / 4 << " words (" << bytes << " bytes) to " << files.out << '\n';
  return kOk;
}

int analyze_hist(const Globals& g, const AnalyzeFlags& a, const Files& files, std::ostream& out) {
  analysis::HistogramConfig c;
  c.k = a.k;
  if (!a.mu.empty()) c.mu = a.mu;
  c.seeds = scaled<std::size_t>(a.seeds, g.paper_scale, 10, 100);
  c.samples = a.samples.value_or(10'000);
  c.bins = a.bins;
  c.transient = a.transient;
  c.order = parse_eval_order(a.order);
  if (!g.precision.empty()) c.precision = PrecisionSpec::parse(g.precision);
  c.master_seed = g.seed;
  auto r = analysis::histogram_experiment(c, g.threads);
  auto path = path_in(files.out_dir, "hist_k" + std::to_string(c.k) + ".csv");
  analysis::export_csv(r, path);
  std::size_t uniform = 0;
  for (const auto& counts : r.seed_counts) uniform += analysis::chi_square_uniform(counts).p_value >= a.alpha;
  out << "hist k=" << c.k << ": " << uniform << "/" << c.seeds << " seeds uniform at alpha=" << fmt_double(a.alpha)
      << ", redraws=" << r.redraws << " -> " << path << '\n';
  return a.assert_ok && uniform * 10 < c.seeds * 9 ? kAssertion : kOk;
}

int analyze_bif(const Globals& g, const AnalyzeFlags& a, const Files& files, std::ostream& out) {
  analysis::BifurcationConfig c;
  c.mu_lo = a.mu_lo;
  c.mu_hi = a.mu_hi;
  c.mu_steps = a.steps;
  c.k = a.k;
  c.iters = scaled<std::uint64_t>(a.iters, g.paper_scale, 10'000, 100'000);
  c.transient = std::min<std::uint64_t>(a.transient, c.iters - 1);
  c.x_bins = a.x_bins;
  if (!a.x0.empty()) c.x0 = a.x0;
  c.order = parse_eval_order(a.order);
  if (!g.precision.empty()) c.precision = PrecisionSpec::parse(g.precision);
  auto grid = analysis::bifurcation_grid(c, g.threads);
  const std::string stem = "bif_k" + std::to_string(c.k);
  auto csv = path_in(files.out_dir, stem + ".csv");
  analysis::export_csv(grid, csv);
  auto pgm_path = path_in(files.out_dir, stem + ".pgm");
  std::ofstream pgm(pgm_path, std::ios::binary | std::ios::trunc);
  analysis::write_pgm(pgm, grid);
  if (!pgm.flush()) throw Error(ErrorCode::io, "failed writing '" + pgm_path + "'");
  std::size_t degenerate = std::count(grid.degenerate.begin(), grid.degenerate.end(), true);
  out << "bif k=" << c.k << ": " << grid.mu.size() << " columns, " << degenerate << " degenerate -> " << csv << ", "
      << pgm_path << '\n';
  return kOk;
}

int analyze_retmap(const Globals& g, const AnalyzeFlags& a, const Files& files, std::ostream& out) {
  analysis::ReturnMapConfig c;
  c.k = a.k;
  if (!a.mu.empty()) c.mu = a.mu;
  c.n = a.n;
  c.transient = a.transient;
  c.dims = a.dims;
  c.x0 = a.x0;
  c.seed = g.seed;
  c.order = parse_eval_order(a.order);
  if (!g.precision.empty()) c.precision = PrecisionSpec::parse(g.precision);
  auto d = analysis::return_map_data(c);
  auto path = path_in(files.out_dir, "retmap_k" + std::to_string(c.k) + ".csv");
  analysis::export_csv(d, path);
  double rho = analysis::lag_autocorrelation(d.series, 1);
  double dev = analysis::parabola_deviation(d, Coefficient(c.mu), c.order);
  bool pass = std::abs(rho) < 0.05;
  out << "retmap k=" << c.k << ": lag-1 correlation " << fmt_double(rho) << (pass ? " (decorrelated)" : " (correlated)")
      << ", max parabola deviation " << fmt_double(dev) << " -> " << path << '\n';
  return a.assert_ok && !pass ? kAssertion : kOk;
}

int analyze_kac(const Globals& g, const AnalyzeFlags& a, const Files& files, std::ostream& out) {
  analysis::KacConfig c;
  c.k = a.k;
  if (!a.mu.empty()) c.mu = a.mu;
  c.site = a.site;
  c.sites = a.sites;
  c.x_min = a.x_min;
  c.x_max = a.x_max;
  c.min_returns = a.min_returns.value_or(2'000);
  c.transient = a.transient;
  c.x0 = a.x0;
  c.seed = g.seed;
  c.order = parse_eval_order(a.order);
  if (!g.precision.empty()) c.precision = PrecisionSpec::parse(g.precision);
  auto r = analysis::kac_report(c);
  auto path = path_in(files.out_dir, "kac_k" + std::to_string(c.k) + "_site" + std::to_string(c.site) + ".csv");
  analysis::export_csv(r, path);
  bool pass = r.relative_error <= 0.10;
  out << "kac k=" << c.k << " site=" << c.site << ": predicted " << fmt_double(r.predicted_mean_return)
      << ", empirical " << fmt_double(r.empirical_mean_return) << " over " << r.returns << " returns, relative error "
      << fmt_double(r.relative_error) << (pass ? " PASS" : " FAIL") << " -> " << path << '\n';
  return a.assert_ok && !pass ? kAssertion : kOk;
}

int analyze_cipherdist(const Globals& g, const AnalyzeFlags& a, const Files& files, std::ostream& out) {
  analysis::CipherDistConfig c;
  if (!files.key.empty()) {
    c.key_template = load_key(files.key, g);
  } else {
    KeyOverrides o;
    if (!g.precision.empty()) o.precision = PrecisionSpec::parse(g.precision);
    c.key_template = keygen(g.seed, o);
  }
  c.k_set = parse_int_list(a.k_set);
  c.plaintexts = scaled<std::size_t>(a.plaintexts, g.paper_scale, 10, 100);
  c.letters = scaled<std::size_t>(a.letters, g.paper_scale, 1'000, 10'000);
  c.include_baseline = !a.no_baseline;
  if (!a.external.empty()) c.external_path = a.external;
  c.log_bins = a.log_bins;
  c.master_seed = g.seed;
  auto results = analysis::cipher_distribution_experiment(c, g.threads);
  auto path = path_in(files.out_dir, "cipherdist.csv");
  analysis::export_csv(results, path);
  std::size_t excluded = 0;
  out << "cipherdist:";
  for (const auto& r : results) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& t : r.totals) {
      if (t) sum += static_cast<double>(*t), ++n;
    }
    excluded += r.excluded;
    out << ' ' << r.label << " mean total " << (n ? fmt_double(sum / static_cast<double>(n)) : "n/a") << " ("
        << r.excluded << " excluded);";
  }
  out << " -> " << path << '\n';
  return a.assert_ok && excluded > 0 ? kAssertion : kOk;
}

int analyze_battery(const Globals& g, const AnalyzeFlags& a, const Files& files, std::ostream& out) {
  analysis::BatterySweepConfig c;
  c.k = a.k;
  if (!a.mu.empty()) c.mu = a.mu;
  c.seeds = scaled<std::size_t>(a.seeds, g.paper_scale, 10, 100);
  c.bits = scaled<std::uint64_t>(a.bits, g.paper_scale, 1'000'000, 100'000'000);
  c.transient = a.transient;
  c.alpha = a.alpha;
  c.order = parse_eval_order(a.order);
  if (!g.precision.empty()) c.precision = PrecisionSpec::parse(g.precision);
  c.master_seed = g.seed;
  auto r = analysis::battery_sweep(c, g.threads);
  auto path = path_in(files.out_dir, "battery_k" + std::to_string(c.k) + ".csv");
  analysis::export_csv(r, path);
  bool all = true;
  out << "battery k=" << c.k << ":";
  for (const char* test : {"monobit", "runs", "block_frequency"}) {
    auto passes = r.passes(test);
    all = all && passes * 10 >= c.seeds * 9;
    out << ' ' << test << ' ' << passes << '/' << c.seeds;
  }
  out << (all ? " PASS" : " FAIL") << " -> " << path << '\n';
  return a.assert_ok && !all ? kAssertion : kOk;
}

}  // namespace

std::uint64_t default_master_seed() {
  const char* env = std::getenv("KZOOM_SEED");
  if (!env || !*env) return kDefaultMasterSeed;
  std::uint64_t v = 0;
  std::string_view s(env);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw Error(ErrorCode::validation, "KZOOM_SEED is not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Globals g;
  KeyFlags key;
  Files files;
  OrbitFlags orbit;
  AnalyzeFlags an;

  try {
    g.seed = default_master_seed();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  }

  CLI::App app{"Deep-zoom logistic map toolkit: cipher, PRNG streams and orbit statistics", "kzoom"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "Master seed (default 20190325, or KZOOM_SEED)");
  app.add_option("--threads", g.threads, "Worker threads for analyses (0 = all cores)")->capture_default_str();
  app.add_option("--precision", g.precision, "Precision override: binary64 or decimal:P");
  app.add_flag("--paper-scale", g.paper_scale, "Use the published experiment sizes instead of the desk-scale ones");

  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key file and print its fingerprint");
  keygen_cmd->add_option("--out,-o", files.out, "Key file to write")->required();
  keygen_cmd->add_option("--mu", key.mu, "Control parameter, at most 4");
  keygen_cmd->add_option("--x0", key.x0, "Initial condition in ]0,1[ (default drawn from the seed)");
  keygen_cmd->add_option("--k", key.k, "Deep-zoom depth");
  keygen_cmd->add_option("--sites", key.sites, "Number of sites S");
  keygen_cmd->add_option("--x-min", key.x_min, "Lower edge of the partitioned interval");
  keygen_cmd->add_option("--x-max", key.x_max, "Upper edge of the partitioned interval");
  keygen_cmd->add_option("--n0", key.n0, "Minimum iterations before a visit can be accepted");
  keygen_cmd->add_option("--n-max", key.n_max, "Maximum ciphertext count");
  keygen_cmd->add_option("--eta", key.eta, "Visit rejection probability in [0,1[");
  keygen_cmd->add_option("--order", key.order, "Evaluation order: mu-first or product-first");
  keygen_cmd->add_option("--chain", key.chain, "Chaining: zoomed or underlying");
  keygen_cmd->add_option("--association", key.association, "Symbol-to-site map: shuffled or ascii")
      ->default_val("shuffled");

  auto* enc_cmd = app.add_subcommand("encrypt", "Encrypt a file");
  auto* dec_cmd = app.add_subcommand("decrypt", "Decrypt a ciphertext file");
  for (auto* cmd : {enc_cmd, dec_cmd}) {
    cmd->add_option("--key,-k", files.key, "Key file")->required();
    cmd->add_option("--in,-i", files.in, "Input file")->required();
    cmd->add_option("--out,-o", files.out, "Output file")->required();
  }
  enc_cmd->add_option("--aux-seed", files.aux_seed, "Seed for the visit-rejection draws")->capture_default_str();
  enc_cmd->add_option("--format", files.format, "Ciphertext format: text or bin")->capture_default_str();

  auto* gen_cmd = app.add_subcommand("gen", "Write a raw 32-bit word stream");
  gen_cmd->add_option("--out,-o", files.out, "Stream file to write")->required();
  gen_cmd->add_option("--key", files.key, "Take orbit parameters from a key file");
  gen_cmd->add_option("--mu", orbit.mu, "Control parameter")->capture_default_str();
  gen_cmd->add_option("--x0", orbit.x0, "Initial condition (default drawn from the seed)");
  gen_cmd->add_option("--k", orbit.k, "Deep-zoom depth")->capture_default_str();
  gen_cmd->add_option("--order", orbit.order, "Evaluation order")->capture_default_str();
  gen_cmd->add_option("--words", orbit.words, "Number of 32-bit words")->capture_default_str();
  gen_cmd->add_option("--transient", orbit.transient, "Iterations discarded first")->capture_default_str();
  gen_cmd->add_option("--byte-order", orbit.byte_order, "little or big")->capture_default_str();

  auto* analyze_cmd = app.add_subcommand("analyze", "Run an orbit or cipher experiment");
  analyze_cmd->require_subcommand(1);
  analyze_cmd->fallthrough();
  analyze_cmd->add_option("--out-dir", files.out_dir, "Directory for CSV/PGM output")->capture_default_str();
  analyze_cmd->add_flag("--assert", an.assert_ok, "Exit 5 when the experiment's check fails");
  analyze_cmd->add_option("--order", an.order, "Evaluation order")->capture_default_str();

  auto* hist = analyze_cmd->add_subcommand("hist", "Frequency distribution over seeds (check: 90% of seeds uniform)");
  hist->add_option("--k", an.k, "Deep-zoom depth");
  hist->add_option("--mu", an.mu, "Control parameter (default 4)");
  hist->add_option("--seeds", an.seeds, "Seeds (desk 10, full 100)");
  hist->add_option("--samples", an.samples, "Samples per seed (default 10000)");
  hist->add_option("--bins", an.bins, "Bins")->capture_default_str();
  hist->add_option("--transient", an.transient, "Iterations discarded per seed")->capture_default_str();
  hist->add_option("--alpha", an.alpha, "Uniformity significance level")->capture_default_str();

  auto* bif = analyze_cmd->add_subcommand("bif", "Bifurcation density grid (CSV and PGM)");
  bif->add_option("--k", an.k, "Deep-zoom depth");
  bif->add_option("--mu-lo", an.mu_lo, "First mu column")->capture_default_str();
  bif->add_option("--mu-hi", an.mu_hi, "Last mu column")->capture_default_str();
  bif->add_option("--steps", an.steps, "Number of mu columns")->capture_default_str();
  bif->add_option("--iters", an.iters, "Iterations per column including transient (desk 1e4, full 1e5)");
  bif->add_option("--transient", an.transient, "Iterations discarded per column")->capture_default_str();
  bif->add_option("--x-bins", an.x_bins, "Bins along x")->capture_default_str();
  bif->add_option("--x0", an.x0, "Initial condition (default 0.232323)");

  auto* retmap = analyze_cmd->add_subcommand("retmap", "Return map pairs or triples (check: |lag-1 correlation| < 0.05)");
  retmap->add_option("--k", an.k, "Deep-zoom depth");
  retmap->add_option("--mu", an.mu, "Control parameter (default 4)");
  retmap->add_option("--n", an.n, "Samples")->capture_default_str();
  retmap->add_option("--dims", an.dims, "2 for pairs, 3 for triples")->capture_default_str();
  retmap->add_option("--x0", an.x0, "Initial condition (default drawn from the seed)");
  retmap->add_option("--transient", an.transient, "Iterations discarded first")->capture_default_str();

  auto* cipherdist = analyze_cmd->add_subcommand("cipherdist", "Ciphertext count distribution per trajectory source");
  cipherdist->add_option("--key", files.key, "Key template (default generated from the seed)");
  cipherdist->add_option("--k-set", an.k_set, "Comma-separated k values")->capture_default_str();
  cipherdist->add_option("--plaintexts", an.plaintexts, "Plaintexts per source (desk 10, full 100)");
  cipherdist->add_option("--letters", an.letters, "Letters per plaintext (desk 1000, full 10000)");
  cipherdist->add_option("--external", an.external, "Raw random file used as an extra source");
  cipherdist->add_flag("--no-baseline", an.no_baseline, "Skip the baseline PRNG source");
  cipherdist->add_option("--log-bins", an.log_bins, "Logarithmic histogram bins")->capture_default_str();

  auto* kac = analyze_cmd->add_subcommand("kac", "Mean return time to one site (check: relative error <= 0.10)");
  kac->add_option("--k", an.k, "Deep-zoom depth");
  kac->add_option("--mu", an.mu, "Control parameter (default 4)");
  kac->add_option("--site", an.site, "Site index, 1-based")->capture_default_str();
  kac->add_option("--sites", an.sites, "Number of sites")->capture_default_str();
  kac->add_option("--x-min", an.x_min, "Lower edge of the partitioned interval")->capture_default_str();
  kac->add_option("--x-max", an.x_max, "Upper edge of the partitioned interval")->capture_default_str();
  kac->add_option("--min-returns", an.min_returns, "Returns to observe (default 2000)");
  kac->add_option("--x0", an.x0, "Initial condition (default drawn from the seed)");
  kac->add_option("--transient", an.transient, "Iterations discarded first")->capture_default_str();

  auto* battery = analyze_cmd->add_subcommand("battery", "Monobit/runs/block-frequency over seeds (check: 90% pass)");
  battery->add_option("--k", an.k, "Deep-zoom depth");
  battery->add_option("--mu", an.mu, "Control parameter (default 3.99999)");
  battery->add_option("--seeds", an.seeds, "Seeds (desk 10, full 100)");
  battery->add_option("--bits", an.bits, "Bits per seed (desk 1e6, full 1e8)");
  battery->add_option("--transient", an.transient, "Iterations discarded per seed")->capture_default_str();
  battery->add_option("--alpha", an.alpha, "Significance level")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  }

  try {
    if (*keygen_cmd) return cmd_keygen(g, key, *keygen_cmd, files, out);
    if (*enc_cmd) return cmd_encrypt(g, files, out);
    if (*dec_cmd) return cmd_decrypt(g, files, out);
    if (*gen_cmd) return cmd_gen(g, orbit, *gen_cmd, files, out);
    if (*hist) return analyze_hist(g, an, files, out);
    if (*bif) return analyze_bif(g, an, files, out);
    if (*retmap) return analyze_retmap(g, an, files, out);
    if (*cipherdist) return analyze_cipherdist(g, an, files, out);
    if (*kac) return analyze_kac(g, an, files, out);
    if (*battery) return analyze_battery(g, an, files, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kUsage;
}

}  // namespace kzoom::cli
