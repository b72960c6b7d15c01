#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kzoom/chaos.hpp"

namespace kzoom {

enum class ByteOrder { little, big };

std::string_view to_string(ByteOrder order);
ByteOrder parse_byte_order(std::string_view text);

struct StreamConfig {
  OrbitParams params;
  std::uint64_t transient = 1000;
  std::uint64_t word_count = 2'800'000;
  ByteOrder byte_order = ByteOrder::little;

  void validate() const;
};

/// floor(y * 2^32). Exact in both backends.
std::uint32_t extract_word32(const RealValue& y);

/// Words from successive zoomed values after the transient.
std::vector<std::uint32_t> generate_words(const StreamConfig& config);

/// Writes raw 4-byte words with no header and returns the byte count.
/// A collapsed orbit throws DegenerateOrbit with `unit()` set to the word
/// index; whatever reached the sink by then is not a valid stream.
std::uint64_t generate_stream(const StreamConfig& config, std::ostream& sink);

/// Bits in stream order; each word contributes its most significant bit first.
class BitSequence {
 public:
  BitSequence() = default;
  explicit BitSequence(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  static BitSequence from_words(std::span<const std::uint32_t> words);
  /// "0110..." with optional whitespace.
  static BitSequence from_string(std::string_view text);

  std::size_t size() const { return bits_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::span<const std::uint8_t> bits() const { return bits_; }

 private:
  std::vector<std::uint8_t> bits_;
};

struct BatteryReport {
  std::string test;
  std::string name;
  std::uint64_t n_bits = 0;
  double statistic = 0.0;
  double p_value = 0.0;
  double alpha = 0.01;
  bool passed = false;
  std::string note;
};

inline constexpr double kDefaultAlpha = 0.01;

BatteryReport monobit_test(const BitSequence& bits, double alpha = kDefaultAlpha);
BatteryReport runs_test(const BitSequence& bits, double alpha = kDefaultAlpha);
BatteryReport block_frequency_test(const BitSequence& bits, std::size_t block_length = 128,
                                   double alpha = kDefaultAlpha);

/// monobit, runs and block_frequency(128), each labelled with `name`.
std::vector<BatteryReport> run_battery(const BitSequence& bits, const std::string& name,
                                       double alpha = kDefaultAlpha);

/// Columns: test,name,n_bits,statistic,p_value,alpha,pass
void write_battery_csv(std::ostream& out, std::span<const BatteryReport> reports);

}  // namespace kzoom
