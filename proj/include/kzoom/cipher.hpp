#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kzoom/chaos.hpp"
#include "kzoom/error.hpp"
#include "kzoom/real.hpp"

namespace kzoom {

/// Which value seeds the next plaintext unit. `zoomed` restarts the
/// underlying orbit from the accepted y; `underlying` keeps iterating x.
/// They coincide for k = 0.
enum class ChainMode { zoomed, underlying };

std::string_view to_string(ChainMode mode);
ChainMode parse_chain_mode(std::string_view text);

/// Full secret of the ergodic cipher. Decimal quantities keep their exact
/// spelling so the key means the same thing under every backend.
struct CipherKey {
  static constexpr std::uint32_t kMaxReturn = 65532;

  std::string mu = "3.99999";
  std::string x0 = "0.5";
  int k = 4;
  int sites = 256;
  std::string x_min = "0.2";
  std::string x_max = "0.8";
  std::uint32_t n0 = 250;
  std::uint32_t n_max = kMaxReturn;
  std::string eta = "0";
  /// association[symbol] = site, sites numbered 1..S.
  std::vector<int> association;
  PrecisionSpec precision = PrecisionSpec::decimal();
  EvalOrder order = EvalOrder::mu_first;
  ChainMode chain = ChainMode::zoomed;

  /// Throws ValidationError listing every violated invariant.
  void validate() const;

  OrbitParams orbit_params() const;
  double eta_value() const;
  /// inverse[site] = symbol, index 0 unused.
  std::vector<int> inverse_association() const;

  friend bool operator==(const CipherKey&, const CipherKey&) = default;
};

/// Symbol v goes to site v, and symbol 0 to site S. With S = 256 this is the
/// byte-as-site convention of the classic "hi" -> (104, 105) example.
std::vector<int> ascii_association(int sites);

/// S equal cells [lower, upper) over [x_min, x_max). Cell bounds are exact in
/// decimal mode (rounded up to P digits when the rational boundary is not
/// representable), and site lookup agrees with them bit for bit.
class Partition {
 public:
  Partition(std::string_view x_min, std::string_view x_max, int sites, PrecisionSpec precision);
  explicit Partition(const CipherKey& key) : Partition(key.x_min, key.x_max, key.sites, key.precision) {}
  Partition(const CipherKey& key, PrecisionSpec precision)
      : Partition(key.x_min, key.x_max, key.sites, precision) {}

  int sites() const { return sites_; }
  const PrecisionSpec& precision() const { return precision_; }
  /// (x_max - x_min) / S as a double.
  double epsilon() const { return epsilon_; }

  std::optional<int> site_of(const RealValue& y) const;
  std::optional<int> site_of(double y) const;
  std::optional<int> site_of(const mpz_class& units) const;

  /// Throws IndexOutOfRange unless 1 <= site <= S.
  std::pair<RealValue, RealValue> bounds(int site) const;

 private:
  int sites_;
  PrecisionSpec precision_;
  double epsilon_;
  std::vector<double> lowers_b64_;
  std::vector<mpz_class> lowers_dec_;
};

std::optional<int> site_of(const RealValue& y, const CipherKey& key);
std::pair<RealValue, RealValue> site_bounds(int site, const CipherKey& key);

/// Stream of values in [0,1) that drives the cipher loop.
class TrajectorySource {
 public:
  virtual ~TrajectorySource() = default;

  virtual std::string label() const = 0;
  /// Precision of the produced values; the partition is built to match.
  virtual PrecisionSpec precision() const = 0;
  /// Advances one step and returns the site of the new value.
  virtual std::optional<int> step(const Partition& partition) = 0;
  /// Most recent value.
  virtual RealValue value() const = 0;
  /// Marks the most recent value as accepted; the next unit starts from it.
  virtual void commit_unit() = 0;
  /// Draws consumed so far.
  virtual std::uint64_t consumed() const = 0;
};

/// k-logistic orbit from the key's parameters.
std::unique_ptr<TrajectorySource> make_klogistic_source(const OrbitParams& params,
                                                        ChainMode chain = ChainMode::zoomed);

/// General-purpose baseline (std::mt19937_64, 53-bit doubles). Chaining is a
/// no-op: the generator simply continues.
std::unique_ptr<TrajectorySource> make_baseline_source(std::uint64_t seed);

/// Raw bytes, 4 per draw as a little-endian word over 2^32. Shares `bytes`
/// with other readers; throws ExternalFileExhausted at the end.
std::unique_ptr<TrajectorySource> make_external_source(std::shared_ptr<const std::vector<std::uint8_t>> bytes,
                                                       std::string label, std::uint64_t cursor = 0);
std::shared_ptr<const std::vector<std::uint8_t>> read_external_file(const std::string& path);

struct Ciphertext {
  std::vector<std::uint32_t> counts;
  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

struct EncryptedUnit {
  std::uint32_t count = 0;
  RealValue arrival;
  int site = 0;
};

struct DecryptedUnit {
  int symbol = 0;
  RealValue arrival;
  int site = 0;
};

/// Per-message encryption state: key, chained trajectory, and the seeded
/// randomizer used for eta acceptance (never consulted when eta = 0).
class EncryptSession {
 public:
  EncryptSession(const CipherKey& key, std::uint64_t aux_seed);
  EncryptSession(const CipherKey& key, std::unique_ptr<TrajectorySource> source, std::uint64_t aux_seed);

  /// Throws ReturnExhausted when no visit is accepted within N_max steps.
  EncryptedUnit encrypt_unit(int symbol);
  const TrajectorySource& source() const { return *source_; }

 private:
  CipherKey key_;
  std::unique_ptr<TrajectorySource> source_;
  Partition partition_;
  std::mt19937_64 aux_;
  double eta_;
};

class DecryptSession {
 public:
  explicit DecryptSession(const CipherKey& key);
  DecryptSession(const CipherKey& key, std::unique_ptr<TrajectorySource> source);

  /// Throws InvalidCiphertext for out-of-range counts or arrivals outside
  /// every site.
  DecryptedUnit decrypt_unit(std::uint32_t count);

 private:
  CipherKey key_;
  std::unique_ptr<TrajectorySource> source_;
  Partition partition_;
  std::vector<int> inverse_;
};

/// One unit from an explicit chain value `x`.
DecryptedUnit decrypt_unit(const RealValue& x, std::uint32_t count, const CipherKey& key);

Ciphertext encrypt(std::span<const std::uint8_t> plaintext, const CipherKey& key, std::uint64_t aux_seed = 0);
std::vector<std::uint8_t> decrypt(const Ciphertext& ciphertext, const CipherKey& key);

Ciphertext encrypt_with(TrajectorySource& source, std::span<const std::uint8_t> plaintext, const CipherKey& key,
                        std::uint64_t aux_seed = 0);
std::vector<std::uint8_t> decrypt_with(TrajectorySource& source, const Ciphertext& ciphertext,
                                       const CipherKey& key);

struct KeyOverrides {
  std::optional<std::string> mu;
  std::optional<std::string> x0;
  std::optional<int> k;
  std::optional<int> sites;
  std::optional<std::string> x_min;
  std::optional<std::string> x_max;
  std::optional<std::uint32_t> n0;
  std::optional<std::uint32_t> n_max;
  std::optional<std::string> eta;
  std::optional<PrecisionSpec> precision;
  std::optional<EvalOrder> order;
  std::optional<ChainMode> chain;
  std::optional<std::vector<int>> association;
};

/// Random x0 and association from `seed`, documented defaults otherwise,
/// then `overrides`, then validation.
CipherKey keygen(std::uint64_t seed, const KeyOverrides& overrides = {});

/// Canonical `name = value` text; parse(serialize(k)) == k.
std::string key_serialize(const CipherKey& key);
/// Throws ParseError (with line number) or ValidationError.
CipherKey key_parse(std::string_view text);
/// Hex prefix of SHA-256 over the canonical serialization.
std::string key_fingerprint(const CipherKey& key);

enum class CiphertextFormat { text, binary };

/// Header line "kzoom-ct v1 text|bin", then one decimal count per line or
/// 4-byte little-endian words.
void write_ciphertext(std::ostream& out, const Ciphertext& ciphertext, CiphertextFormat format);
Ciphertext read_ciphertext(std::istream& in);

}  // namespace kzoom
