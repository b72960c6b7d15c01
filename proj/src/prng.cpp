#include "kzoom/prng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include <boost/math/special_functions/gamma.hpp>

#include "kzoom/detail/format.hpp"
#include "kzoom/detail/kernels.hpp"
#include "kzoom/error.hpp"

namespace kzoom {

std::string_view to_string(ByteOrder order) { return order == ByteOrder::little ? "little" : "big"; }

ByteOrder parse_byte_order(std::string_view text) {
  if (text == "little") return ByteOrder::little;
  if (text == "big") return ByteOrder::big;
  throw Error(ErrorCode::parse, "unknown byte order '" + std::string(text) + "'");
}

void StreamConfig::validate() const {
  params.validate();
  if (word_count == 0) throw Error(ErrorCode::validation, "word_count must be at least 1");
}

std::uint32_t extract_word32(const RealValue& y) {
  if (y.is_decimal()) {
    const auto& d = y.as_decimal();
    mpz_class one = pow10(d.digits());
    if (sgn(d.units()) < 0 || d.units() >= one) throw Error(ErrorCode::domain, "y must lie in [0,1)");
    mpz_class w = (d.units() << 32) / one;
    return static_cast<std::uint32_t>(w.get_ui());
  }
  double v = y.as_binary64();
  if (!(v >= 0.0 && v < 1.0)) throw Error(ErrorCode::domain, "y must lie in [0,1)");
  return static_cast<std::uint32_t>(std::ldexp(v, 32));
}

namespace {

template <class Sink>
void for_each_word(const StreamConfig& config, Sink&& sink) {
  config.validate();
  detail::with_orbit_core(config.params, [&](auto& core) {
    core.skip(config.transient);
    for (std::uint64_t i = 0; i < config.word_count; ++i) {
      try {
        core.advance();
      } catch (const Error& e) {
        throw e.with_unit(i);
      }
      sink(core.y_word32());
    }
  });
}

}  // namespace

std::vector<std::uint32_t> generate_words(const StreamConfig& config) {
  std::vector<std::uint32_t> words;
  words.reserve(config.word_count);
  for_each_word(config, [&](std::uint32_t w) { words.push_back(w); });
  return words;
}

std::uint64_t generate_stream(const StreamConfig& config, std::ostream& sink) {
  constexpr std::size_t kChunkWords = 16384;
  std::vector<char> buffer;
  buffer.reserve(kChunkWords * 4);
  std::uint64_t written = 0;
  auto flush = [&] {
    sink.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (!sink) throw Error(ErrorCode::io, "stream sink rejected write");
    written += buffer.size();
    buffer.clear();
  };
  const bool big = config.byte_order == ByteOrder::big;
  for_each_word(config, [&](std::uint32_t w) {
    std::array<char, 4> b{};
    for (int i = 0; i < 4; ++i) {
      int shift = big ? 8 * (3 - i) : 8 * i;
      b[static_cast<std::size_t>(i)] = static_cast<char>((w >> shift) & 0xffu);
    }
    buffer.insert(buffer.end(), b.begin(), b.end());
    if (buffer.size() >= kChunkWords * 4) flush();
  });
  flush();
  return written;
}

BitSequence BitSequence::from_words(std::span<const std::uint32_t> words) {
  std::vector<std::uint8_t> bits;
  bits.reserve(words.size() * 32);
  for (std::uint32_t w : words) {
    for (int b = 31; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((w >> b) & 1u));
  }
  return BitSequence(std::move(bits));
}

BitSequence BitSequence::from_string(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0' || c == '1') {
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    } else if (c != ' ' && c != '\n' && c != '\t') {
      throw Error(ErrorCode::parse, "bit strings may only contain 0 and 1");
    }
  }
  return BitSequence(std::move(bits));
}

namespace {

void require_bits(const BitSequence& bits, std::size_t minimum) {
  if (bits.size() < minimum) {
    throw Error(ErrorCode::too_few_bits,
                "need at least " + std::to_string(minimum) + " bits, got " + std::to_string(bits.size()));
  }
}

BatteryReport make_report(std::string test, const BitSequence& bits, double statistic, double p, double alpha) {
  p = std::clamp(p, 0.0, 1.0);
  return BatteryReport{std::move(test), {}, bits.size(), statistic, p, alpha, p >= alpha, {}};
}

}  // namespace

BatteryReport monobit_test(const BitSequence& bits, double alpha) {
  require_bits(bits, 100);
  long long sum = 0;
  for (auto b : bits.bits()) sum += 2 * static_cast<int>(b) - 1;
  const double n = static_cast<double>(bits.size());
  const double s_obs = std::abs(static_cast<double>(sum)) / std::sqrt(n);
  return make_report("monobit", bits, s_obs, std::erfc(s_obs / std::sqrt(2.0)), alpha);
}

BatteryReport runs_test(const BitSequence& bits, double alpha) {
  require_bits(bits, 100);
  const auto v = bits.bits();
  const double n = static_cast<double>(v.size());
  std::size_t ones = 0;
  for (auto b : v) ones += b;
  const double pi = static_cast<double>(ones) / n;
  if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(n)) {
    auto r = make_report("runs", bits, 0.0, 0.0, alpha);
    r.note = "frequency prerequisite";
    return r;
  }
  std::uint64_t runs = 1;
  for (std::size_t i = 1; i < v.size(); ++i) runs += v[i] != v[i - 1];
  const double vn = static_cast<double>(runs);
  const double p = std::erfc(std::abs(vn - 2.0 * n * pi * (1.0 - pi)) /
                             (2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi)));
  return make_report("runs", bits, vn, p, alpha);
}

BatteryReport block_frequency_test(const BitSequence& bits, std::size_t block_length, double alpha) {
  if (block_length == 0) throw Error(ErrorCode::domain, "block length must be positive");
  require_bits(bits, 100 * block_length);
  const auto v = bits.bits();
  const std::size_t blocks = v.size() / block_length;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < blocks; ++i) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < block_length; ++j) ones += v[i * block_length + j];
    double dev = static_cast<double>(ones) / static_cast<double>(block_length) - 0.5;
    chi2 += dev * dev;
  }
  chi2 *= 4.0 * static_cast<double>(block_length);
  const double p = boost::math::gamma_q(static_cast<double>(blocks) / 2.0, chi2 / 2.0);
  return make_report("block_frequency", bits, chi2, p, alpha);
}

std::vector<BatteryReport> run_battery(const BitSequence& bits, const std::string& name, double alpha) {
  std::vector<BatteryReport> out{monobit_test(bits, alpha), runs_test(bits, alpha),
                                 block_frequency_test(bits, 128, alpha)};
  for (auto& r : out) r.name = name;
  return out;
}

void write_battery_csv(std::ostream& out, std::span<const BatteryReport> reports) {
  out << "test,name,n_bits,statistic,p_value,alpha,pass\n";
  for (const auto& r : reports) {
    out << r.test << ',' << r.name << ',' << r.n_bits << ',' << detail::fmt_double(r.statistic) << ','
        << detail::fmt_double(r.p_value) << ',' << detail::fmt_double(r.alpha) << ','
        << (r.passed ? "true" : "false") << '\n';
  }
}

}  // namespace kzoom
