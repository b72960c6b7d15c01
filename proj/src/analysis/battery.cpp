#include <algorithm>

#include "common.hpp"
#include "kzoom/analysis.hpp"
#include "kzoom/detail/kernels.hpp"

namespace kzoom::analysis {

namespace {

struct SeedBattery {
  std::vector<BatteryReport> reports;
  std::size_t redraws = 0;
};

void validate(const BatterySweepConfig& c) {
  if (c.seeds == 0) throw Error(ErrorCode::domain, "seeds must be positive");
  if (c.bits < 100 * 128) throw Error(ErrorCode::too_few_bits, "battery sweep needs at least 12800 bits");
}

std::string seed_name(const BatterySweepConfig& c, std::size_t index) {
  return "k=" + std::to_string(c.k) + " seed=" + std::to_string(index);
}

BitSequence trimmed(std::span<const std::uint32_t> words, std::uint64_t bits) {
  auto seq = BitSequence::from_words(words);
  if (seq.size() == bits) return seq;
  std::vector<std::uint8_t> v(seq.bits().begin(), seq.bits().begin() + static_cast<std::ptrdiff_t>(bits));
  return BitSequence(std::move(v));
}

template <class Generate>
SeedBattery with_retries(const BatterySweepConfig& c, std::size_t index, Generate&& generate) {
  const std::uint64_t words = (c.bits + 31) / 32;
  for (int attempt = 0; attempt <= kMaxSeedRetries; ++attempt) {
    OrbitParams params{Coefficient(c.mu), detail::attempt_x0(c.master_seed, detail::kStreamBattery, index, attempt),
                       c.k, c.precision, c.order};
    params.validate();
    try {
      std::vector<std::uint32_t> stream = generate(params, words);
      return {run_battery(trimmed(stream, c.bits), seed_name(c, index), c.alpha), static_cast<std::size_t>(attempt)};
    } catch (const Error& e) {
      if (!detail::is_orbit_failure(e)) throw;
    }
  }
  throw Error(ErrorCode::degenerate_orbit, "seed " + std::to_string(index) + " degenerated on every retry");
}

BatterySweepResult collect(std::vector<SeedBattery> seeds) {
  BatterySweepResult r;
  for (auto& s : seeds) {
    r.redraws += s.redraws;
    r.per_seed.push_back(std::move(s.reports));
  }
  return r;
}

}  // namespace

std::size_t BatterySweepResult::passes(const std::string& test) const {
  std::size_t n = 0;
  for (const auto& seed : per_seed) {
    for (const auto& r : seed) n += r.test == test && r.passed;
  }
  return n;
}

std::vector<BatteryReport> BatterySweepResult::flat() const {
  std::vector<BatteryReport> out;
  for (const auto& seed : per_seed) out.insert(out.end(), seed.begin(), seed.end());
  return out;
}

BatterySweepResult battery_sweep(const BatterySweepConfig& c, int threads) {
  validate(c);
  std::vector<SeedBattery> seeds(c.seeds);
  detail::parallel_for(c.seeds, threads, [&](std::size_t i) {
    seeds[i] = with_retries(c, i, [&](const OrbitParams& params, std::uint64_t words) {
      std::vector<std::uint32_t> out;
      out.reserve(words);
      kzoom::detail::with_orbit_core(params, [&](auto& core) {
        core.skip(c.transient);
        for (std::uint64_t w = 0; w < words; ++w) {
          core.advance();
          out.push_back(core.y_word32());
        }
      });
      return out;
    });
  });
  return collect(std::move(seeds));
}

namespace reference {

BatterySweepResult battery_sweep(const BatterySweepConfig& c) {
  validate(c);
  std::vector<SeedBattery> seeds;
  for (std::size_t i = 0; i < c.seeds; ++i) {
    seeds.push_back(with_retries(c, i, [&](const OrbitParams& params, std::uint64_t words) {
      return generate_words(StreamConfig{params, c.transient, words, ByteOrder::little});
    }));
  }
  return collect(std::move(seeds));
}

}  // namespace reference

}  // namespace kzoom::analysis
