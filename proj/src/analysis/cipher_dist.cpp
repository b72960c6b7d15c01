#include <cmath>
#include <random>

#include "common.hpp"
#include "kzoom/analysis.hpp"

namespace kzoom::analysis {

namespace {

struct RunOutcome {
  std::optional<std::uint64_t> total;
  std::vector<std::uint64_t> hist;
};

RunOutcome tally(std::span<const std::uint32_t> counts, const CipherDistConfig& c, const CipherKey& key) {
  RunOutcome out;
  out.hist.assign(c.log_bins, 0);
  std::uint64_t total = 0;
  for (auto n : counts) {
    total += n;
    ++out.hist[log_bin_of(n, key.n0, key.n_max, c.log_bins)];
  }
  out.total = total;
  return out;
}

CipherDistResult merge(std::string label, const CipherDistConfig& c, std::vector<RunOutcome> runs) {
  CipherDistResult r;
  r.label = std::move(label);
  r.n0 = c.key_template.n0;
  r.n_max = c.key_template.n_max;
  r.bin_edges = log_bin_edges(r.n0, r.n_max, c.log_bins);
  r.mean_histogram.assign(c.log_bins, 0.0);
  std::size_t included = 0;
  for (auto& run : runs) {
    r.totals.push_back(run.total);
    if (!run.total) {
      ++r.excluded;
      continue;
    }
    ++included;
    for (std::size_t b = 0; b < c.log_bins; ++b) r.mean_histogram[b] += static_cast<double>(run.hist[b]);
  }
  if (included > 0) {
    for (auto& v : r.mean_histogram) v /= static_cast<double>(included);
  }
  return r;
}

CipherKey key_for(const CipherDistConfig& c, int k) {
  CipherKey key = c.key_template;
  key.k = k;
  key.validate();
  return key;
}

void validate(const CipherDistConfig& c) {
  if (c.log_bins == 0) throw Error(ErrorCode::domain, "log_bins must be positive");
  if (c.plaintexts == 0) throw Error(ErrorCode::domain, "plaintexts must be positive");
  c.key_template.validate();
}

std::string external_label(const std::string& path) {
  auto slash = path.find_last_of('/');
  return "external:" + (slash == std::string::npos ? path : path.substr(slash + 1));
}

/// Encrypts one plaintext unit by unit; an exhausted return marks the run excluded.
RunOutcome run_session(EncryptSession& session, std::span<const std::uint8_t> plaintext, const CipherDistConfig& c,
                       const CipherKey& key) {
  std::vector<std::uint32_t> counts;
  counts.reserve(plaintext.size());
  try {
    for (auto symbol : plaintext) counts.push_back(session.encrypt_unit(symbol).count);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::return_exhausted) throw;
    return RunOutcome{};
  }
  return tally(counts, c, key);
}

// The external file is one shared stream, consumed run after run.
CipherDistResult external_result(const CipherDistConfig& c) {
  auto bytes = read_external_file(*c.external_path);
  const std::string label = external_label(*c.external_path);
  std::vector<RunOutcome> runs;
  std::uint64_t cursor = 0;
  for (std::size_t run = 0; run < c.plaintexts; ++run) {
    auto plaintext = experiment_plaintext(c.master_seed, run, c.letters, c.key_template.sites);
    EncryptSession session(c.key_template, make_external_source(bytes, label, cursor),
                           derive_seed(c.master_seed, detail::kStreamAux, run));
    runs.push_back(run_session(session, plaintext, c, c.key_template));
    cursor += 4 * session.source().consumed();
  }
  return merge(label, c, std::move(runs));
}

}  // namespace

double CipherDistResult::l1_distance(const CipherDistResult& other) const {
  if (mean_histogram.size() != other.mean_histogram.size()) {
    throw Error(ErrorCode::domain, "histograms have different bin counts");
  }
  double sa = 0.0, sb = 0.0;
  for (double v : mean_histogram) sa += v;
  for (double v : other.mean_histogram) sb += v;
  if (sa == 0.0 || sb == 0.0) throw Error(ErrorCode::domain, "empty histogram");
  double d = 0.0;
  for (std::size_t i = 0; i < mean_histogram.size(); ++i) {
    d += std::abs(mean_histogram[i] / sa - other.mean_histogram[i] / sb);
  }
  return d;
}

std::vector<double> log_bin_edges(std::uint32_t n0, std::uint32_t n_max, std::size_t bins) {
  if (bins == 0 || n_max <= n0 + 1) throw Error(ErrorCode::domain, "need N_max > N0 + 1 and at least one bin");
  const double lo = std::log(static_cast<double>(n0) + 1.0);
  const double hi = std::log(static_cast<double>(n_max));
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    edges[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins));
  }
  edges.front() = static_cast<double>(n0) + 1.0;
  edges.back() = static_cast<double>(n_max);
  return edges;
}

std::size_t log_bin_of(std::uint32_t count, std::uint32_t n0, std::uint32_t n_max, std::size_t bins) {
  if (count <= n0 || count > n_max) {
    throw Error(ErrorCode::domain, "count " + std::to_string(count) + " outside (N0, N_max]");
  }
  const double lo = std::log(static_cast<double>(n0) + 1.0);
  const double hi = std::log(static_cast<double>(n_max));
  auto b = static_cast<std::size_t>((std::log(static_cast<double>(count)) - lo) / (hi - lo) * static_cast<double>(bins));
  return b < bins ? b : bins - 1;
}

std::vector<std::uint8_t> experiment_plaintext(std::uint64_t master_seed, std::size_t run, std::size_t letters,
                                               int sites) {
  if (sites < 1) throw Error(ErrorCode::domain, "sites must be positive");
  std::mt19937_64 rng(derive_seed(master_seed, detail::kStreamPlaintext, run));
  const auto alphabet = static_cast<std::uint64_t>(std::min(sites, 256));
  std::vector<std::uint8_t> out(letters);
  for (auto& b : out) b = static_cast<std::uint8_t>(uniform_below(rng, alphabet));
  return out;
}

std::vector<CipherDistResult> cipher_distribution_experiment(const CipherDistConfig& c, int threads) {
  if (c.letters == 0) return {};
  validate(c);
  std::vector<CipherKey> keys;
  for (int k : c.k_set) keys.push_back(key_for(c, k));
  const std::size_t sources = keys.size() + (c.include_baseline ? 1 : 0);
  std::vector<std::vector<RunOutcome>> runs(sources, std::vector<RunOutcome>(c.plaintexts));

  // One task per (source, run); the baseline is the last in-memory source.
  detail::parallel_for(sources * c.plaintexts, threads, [&](std::size_t task) {
    const std::size_t src = task / c.plaintexts, run = task % c.plaintexts;
    auto plaintext = experiment_plaintext(c.master_seed, run, c.letters, c.key_template.sites);
    const std::uint64_t aux = derive_seed(c.master_seed, detail::kStreamAux, run);
    if (src < keys.size()) {
      EncryptSession session(keys[src], aux);
      runs[src][run] = run_session(session, plaintext, c, keys[src]);
    } else {
      EncryptSession session(c.key_template, make_baseline_source(derive_seed(c.master_seed, detail::kStreamBaseline, run)),
                             aux);
      runs[src][run] = run_session(session, plaintext, c, c.key_template);
    }
  });

  std::vector<CipherDistResult> out;
  for (std::size_t i = 0; i < keys.size(); ++i) out.push_back(merge("k=" + std::to_string(keys[i].k), c, std::move(runs[i])));
  if (c.include_baseline) out.push_back(merge("baseline:mt19937_64", c, std::move(runs.back())));
  if (c.external_path) out.push_back(external_result(c));
  return out;
}

namespace reference {

std::vector<CipherDistResult> cipher_distribution_experiment(const CipherDistConfig& c) {
  if (c.letters == 0) return {};
  validate(c);
  auto run_all = [&](const CipherKey& key, auto&& encrypt_run) {
    std::vector<RunOutcome> runs;
    for (std::size_t run = 0; run < c.plaintexts; ++run) {
      auto plaintext = experiment_plaintext(c.master_seed, run, c.letters, key.sites);
      try {
        Ciphertext ct = encrypt_run(run, plaintext, derive_seed(c.master_seed, detail::kStreamAux, run));
        runs.push_back(tally(ct.counts, c, key));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::return_exhausted) throw;
        runs.emplace_back();
      }
    }
    return runs;
  };

  std::vector<CipherDistResult> out;
  for (int k : c.k_set) {
    CipherKey key = key_for(c, k);
    out.push_back(merge("k=" + std::to_string(k), c, run_all(key, [&](std::size_t, auto& pt, std::uint64_t aux) {
                          return encrypt(pt, key, aux);
                        })));
  }
  if (c.include_baseline) {
    const CipherKey& key = c.key_template;
    out.push_back(merge("baseline:mt19937_64", c, run_all(key, [&](std::size_t run, auto& pt, std::uint64_t aux) {
                          auto source = make_baseline_source(derive_seed(c.master_seed, detail::kStreamBaseline, run));
                          return encrypt_with(*source, pt, key, aux);
                        })));
  }
  if (c.external_path) {
    const CipherKey& key = c.key_template;
    const std::string label = external_label(*c.external_path);
    auto source = make_external_source(read_external_file(*c.external_path), label);
    out.push_back(merge(label, c, run_all(key, [&](std::size_t, auto& pt, std::uint64_t aux) {
                          return encrypt_with(*source, pt, key, aux);
                        })));
  }
  return out;
}

}  // namespace reference

}  // namespace kzoom::analysis
