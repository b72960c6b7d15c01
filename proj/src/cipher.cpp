#include "kzoom/cipher.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>

#include "kzoom/detail/kernels.hpp"
#include "kzoom/error.hpp"
#include "kzoom/seed.hpp"

namespace kzoom {

std::string_view to_string(ChainMode mode) { return mode == ChainMode::zoomed ? "zoomed" : "underlying"; }

ChainMode parse_chain_mode(std::string_view text) {
  if (text == "zoomed") return ChainMode::zoomed;
  if (text == "underlying") return ChainMode::underlying;
  throw Error(ErrorCode::parse, "unknown chain mode '" + std::string(text) + "'");
}

std::vector<int> ascii_association(int sites) {
  std::vector<int> a(static_cast<std::size_t>(sites));
  for (int v = 0; v < sites; ++v) a[static_cast<std::size_t>(v)] = v == 0 ? sites : v;
  return a;
}

// ---------------------------------------------------------------------------
// Key

void CipherKey::validate() const {
  std::vector<std::string> problems;
  try {
    orbit_params().validate();
  } catch (const Error& e) {
    problems.emplace_back(std::string(e.what()).substr(std::string_view("ValidationError: ").size()));
  }
  if (sites < 2) problems.emplace_back("S must be at least 2");
  if (!is_decimal_literal(x_min) || !is_decimal_literal(x_max)) {
    problems.emplace_back("x_min and x_max must be decimal literals");
  } else {
    FixedDecimal lo = FixedDecimal::parse(x_min, 1000);
    FixedDecimal hi = FixedDecimal::parse(x_max, 1000);
    if (!(lo < hi) || hi > FixedDecimal(pow10(1000), 1000)) {
      problems.emplace_back("need 0 <= x_min < x_max <= 1");
    } else if (sites >= 1 && precision.is_decimal() && precision.digits >= PrecisionSpec::kMinDecimalDigits) {
      mpz_class w = FixedDecimal::parse(x_max, precision.digits).units() -
                    FixedDecimal::parse(x_min, precision.digits).units();
      if (w < sites) problems.emplace_back("site width (x_max - x_min)/S vanishes at this precision");
    } else if (sites >= 1) {
      double eps = (RealValue::parse(x_max, PrecisionSpec::binary64()).as_binary64() -
                    RealValue::parse(x_min, PrecisionSpec::binary64()).as_binary64()) /
                   sites;
      if (!(eps > 0.0)) problems.emplace_back("site width (x_max - x_min)/S must be positive");
    }
  }
  if (!(n0 < n_max)) problems.emplace_back("need N0 < N_max");
  if (n_max > kMaxReturn) problems.emplace_back("N_max must not exceed 65532");
  if (!is_decimal_literal(eta) || !(FixedDecimal::parse(eta, 64) < FixedDecimal(pow10(64), 64))) {
    problems.emplace_back("eta must be a decimal in [0,1)");
  }
  if (static_cast<int>(association.size()) != sites) {
    problems.emplace_back("association must list exactly S sites");
  } else {
    std::vector<bool> seen(static_cast<std::size_t>(sites) + 1, false);
    for (int s : association) {
      if (s < 1 || s > sites) {
        problems.emplace_back("association site " + std::to_string(s) + " out of range");
        break;
      }
      if (seen[static_cast<std::size_t>(s)]) {
        problems.emplace_back("association is not a bijection (site " + std::to_string(s) + " repeated)");
        break;
      }
      seen[static_cast<std::size_t>(s)] = true;
    }
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    throw Error(ErrorCode::validation, msg);
  }
}

OrbitParams CipherKey::orbit_params() const {
  if (!is_decimal_literal(mu)) throw Error(ErrorCode::validation, "mu is not a decimal literal");
  return OrbitParams{Coefficient(mu), x0, k, precision, order};
}

double CipherKey::eta_value() const { return RealValue::parse(eta, PrecisionSpec::binary64()).as_binary64(); }

std::vector<int> CipherKey::inverse_association() const {
  std::vector<int> inv(static_cast<std::size_t>(sites) + 1, -1);
  for (std::size_t sym = 0; sym < association.size(); ++sym) {
    inv[static_cast<std::size_t>(association[sym])] = static_cast<int>(sym);
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::string_view x_min, std::string_view x_max, int sites, PrecisionSpec precision)
    : sites_(sites), precision_(precision) {
  if (sites < 1) throw Error(ErrorCode::domain, "partition needs at least one site");
  precision.validate();
  const double lo = RealValue::parse(x_min, PrecisionSpec::binary64()).as_binary64();
  const double hi = RealValue::parse(x_max, PrecisionSpec::binary64()).as_binary64();
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) throw Error(ErrorCode::domain, "need 0 <= x_min < x_max <= 1");
  epsilon_ = (hi - lo) / sites;
  if (precision.is_decimal()) {
    const mpz_class dlo = FixedDecimal::parse(x_min, precision.digits).units();
    const mpz_class dhi = FixedDecimal::parse(x_max, precision.digits).units();
    const mpz_class width = dhi - dlo;
    lowers_dec_.reserve(static_cast<std::size_t>(sites) + 1);
    for (int j = 0; j < sites; ++j) {
      mpz_class offset;
      mpz_class num = width * j;
      mpz_cdiv_q_ui(offset.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(sites));
      lowers_dec_.push_back(dlo + offset);
    }
    lowers_dec_.push_back(dhi);
  } else {
    lowers_b64_.reserve(static_cast<std::size_t>(sites) + 1);
    for (int j = 0; j < sites; ++j) lowers_b64_.push_back(j == 0 ? lo : lo + j * epsilon_);
    lowers_b64_.push_back(hi);
  }
}

std::optional<int> Partition::site_of(double y) const {
  if (lowers_b64_.empty()) throw Error(ErrorCode::domain, "binary64 lookup on a decimal partition");
  if (!(y >= lowers_b64_.front() && y < lowers_b64_.back())) return std::nullopt;
  auto it = std::upper_bound(lowers_b64_.begin(), lowers_b64_.end(), y);
  return static_cast<int>(it - lowers_b64_.begin());
}

std::optional<int> Partition::site_of(const mpz_class& units) const {
  if (lowers_dec_.empty()) throw Error(ErrorCode::domain, "decimal lookup on a binary64 partition");
  if (units < lowers_dec_.front() || units >= lowers_dec_.back()) return std::nullopt;
  auto it = std::upper_bound(lowers_dec_.begin(), lowers_dec_.end(), units);
  return static_cast<int>(it - lowers_dec_.begin());
}

std::optional<int> Partition::site_of(const RealValue& y) const {
  if (y.is_decimal()) {
    if (!precision_.is_decimal() || y.as_decimal().digits() != precision_.digits) {
      throw Error(ErrorCode::domain, "value precision does not match the partition");
    }
    return site_of(y.as_decimal().units());
  }
  return site_of(y.as_binary64());
}

std::pair<RealValue, RealValue> Partition::bounds(int site) const {
  if (site < 1 || site > sites_) {
    throw Error(ErrorCode::index_out_of_range, "site " + std::to_string(site) + " outside 1.." + std::to_string(sites_));
  }
  auto i = static_cast<std::size_t>(site);
  if (precision_.is_decimal()) {
    return {RealValue::decimal(FixedDecimal(lowers_dec_[i - 1], precision_.digits)),
            RealValue::decimal(FixedDecimal(lowers_dec_[i], precision_.digits))};
  }
  return {RealValue::binary64(lowers_b64_[i - 1]), RealValue::binary64(lowers_b64_[i])};
}

std::optional<int> site_of(const RealValue& y, const CipherKey& key) { return Partition(key).site_of(y); }

std::pair<RealValue, RealValue> site_bounds(int site, const CipherKey& key) { return Partition(key).bounds(site); }

// ---------------------------------------------------------------------------
// Trajectory sources

namespace {

template <class Kernel>
class KLogisticSource final : public TrajectorySource {
 public:
  KLogisticSource(detail::OrbitCore<Kernel> core, ChainMode chain, PrecisionSpec precision, int k)
      : core_(std::move(core)), chain_(chain), precision_(precision), k_(k) {}

  std::string label() const override { return "k=" + std::to_string(k_); }
  PrecisionSpec precision() const override { return precision_; }

  std::optional<int> step(const Partition& partition) override {
    core_.advance();
    return partition.site_of(core_.y());
  }

  RealValue value() const override { return core_.kernel().to_value(core_.y()); }

  void commit_unit() override {
    if (chain_ == ChainMode::zoomed) core_.reset(core_.y());
  }

  std::uint64_t consumed() const override { return core_.t(); }

 private:
  detail::OrbitCore<Kernel> core_;
  ChainMode chain_;
  PrecisionSpec precision_;
  int k_;
};

class BaselineSource final : public TrajectorySource {
 public:
  explicit BaselineSource(std::uint64_t seed) : rng_(seed) {}

  std::string label() const override { return "baseline:mt19937_64"; }
  PrecisionSpec precision() const override { return PrecisionSpec::binary64(); }
  std::optional<int> step(const Partition& partition) override {
    value_ = unit_double(rng_());
    ++consumed_;
    return partition.site_of(value_);
  }
  RealValue value() const override { return RealValue::binary64(value_); }
  void commit_unit() override {}
  std::uint64_t consumed() const override { return consumed_; }

 private:
  std::mt19937_64 rng_;
  double value_ = 0.0;
  std::uint64_t consumed_ = 0;
};

class ExternalSource final : public TrajectorySource {
 public:
  ExternalSource(std::shared_ptr<const std::vector<std::uint8_t>> bytes, std::string label, std::uint64_t cursor)
      : bytes_(std::move(bytes)), label_(std::move(label)), cursor_(cursor) {}

  std::string label() const override { return label_; }
  PrecisionSpec precision() const override { return PrecisionSpec::binary64(); }
  std::optional<int> step(const Partition& partition) override {
    if (cursor_ + 4 > bytes_->size()) {
      throw Error(ErrorCode::external_file_exhausted,
                  label_ + " ran out after " + std::to_string(consumed_) + " draws");
    }
    const auto* p = bytes_->data() + cursor_;
    std::uint32_t w = std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
                      std::uint32_t{p[3]} << 24;
    cursor_ += 4;
    ++consumed_;
    value_ = static_cast<double>(w) * 0x1.0p-32;
    return partition.site_of(value_);
  }
  RealValue value() const override { return RealValue::binary64(value_); }
  void commit_unit() override {}
  std::uint64_t consumed() const override { return consumed_; }

 private:
  std::shared_ptr<const std::vector<std::uint8_t>> bytes_;
  std::string label_;
  std::uint64_t cursor_;
  std::uint64_t consumed_ = 0;
  double value_ = 0.0;
};

}  // namespace

std::unique_ptr<TrajectorySource> make_klogistic_source(const OrbitParams& params, ChainMode chain) {
  params.validate();
  return detail::with_orbit_core(params, [&](auto& core) -> std::unique_ptr<TrajectorySource> {
    using Kernel = std::remove_cvref_t<decltype(core.kernel())>;
    return std::make_unique<KLogisticSource<Kernel>>(std::move(core), chain, params.precision, params.k);
  });
}

std::unique_ptr<TrajectorySource> make_baseline_source(std::uint64_t seed) {
  return std::make_unique<BaselineSource>(seed);
}

std::unique_ptr<TrajectorySource> make_external_source(std::shared_ptr<const std::vector<std::uint8_t>> bytes,
                                                       std::string label, std::uint64_t cursor) {
  if (!bytes) throw Error(ErrorCode::io, "external source without data");
  return std::make_unique<ExternalSource>(std::move(bytes), std::move(label), cursor);
}

std::shared_ptr<const std::vector<std::uint8_t>> read_external_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  auto data = std::make_shared<std::vector<std::uint8_t>>(std::istreambuf_iterator<char>(in),
                                                          std::istreambuf_iterator<char>());
  return data;
}

// ---------------------------------------------------------------------------
// Sessions

EncryptSession::EncryptSession(const CipherKey& key, std::uint64_t aux_seed)
    : EncryptSession(key, make_klogistic_source(key.orbit_params(), key.chain), aux_seed) {}

EncryptSession::EncryptSession(const CipherKey& key, std::unique_ptr<TrajectorySource> source,
                               std::uint64_t aux_seed)
    : key_((key.validate(), key)),
      source_(std::move(source)),
      partition_(key, source_->precision()),
      aux_(aux_seed),
      eta_(key.eta_value()) {}

EncryptedUnit EncryptSession::encrypt_unit(int symbol) {
  if (symbol < 0 || symbol >= key_.sites) {
    throw Error(ErrorCode::domain, "symbol " + std::to_string(symbol) + " outside the alphabet");
  }
  const int target = key_.association[static_cast<std::size_t>(symbol)];
  for (std::uint32_t t = 1; t <= key_.n_max; ++t) {
    auto site = source_->step(partition_);
    if (t <= key_.n0 || site != target) continue;
    if (eta_ > 0.0 && unit_double(aux_()) < eta_) continue;
    EncryptedUnit unit{t, source_->value(), target};
    source_->commit_unit();
    return unit;
  }
  throw Error(ErrorCode::return_exhausted,
              "no accepted return to site " + std::to_string(target) + " within " + std::to_string(key_.n_max) +
                  " iterations");
}

DecryptSession::DecryptSession(const CipherKey& key)
    : DecryptSession(key, make_klogistic_source(key.orbit_params(), key.chain)) {}

DecryptSession::DecryptSession(const CipherKey& key, std::unique_ptr<TrajectorySource> source)
    : key_((key.validate(), key)),
      source_(std::move(source)),
      partition_(key, source_->precision()),
      inverse_(key.inverse_association()) {}

DecryptedUnit DecryptSession::decrypt_unit(std::uint32_t count) {
  if (count <= key_.n0 || count > key_.n_max) {
    throw Error(ErrorCode::invalid_ciphertext,
                "count " + std::to_string(count) + " outside (N0, N_max]");
  }
  std::optional<int> site;
  for (std::uint32_t t = 0; t < count; ++t) site = source_->step(partition_);
  if (!site) throw Error(ErrorCode::invalid_ciphertext, "arrival lies in no site");
  const int symbol = inverse_[static_cast<std::size_t>(*site)];
  if (symbol < 0) throw Error(ErrorCode::invalid_ciphertext, "site maps to no symbol");
  DecryptedUnit unit{symbol, source_->value(), *site};
  source_->commit_unit();
  return unit;
}

DecryptedUnit decrypt_unit(const RealValue& x, std::uint32_t count, const CipherKey& key) {
  CipherKey from_x = key;
  from_x.x0 = x.to_string();
  return DecryptSession(from_x).decrypt_unit(count);
}

namespace {

// Non-owning adapter so the public *_with overloads can reuse the sessions.
class BorrowedSource final : public TrajectorySource {
 public:
  explicit BorrowedSource(TrajectorySource& inner) : inner_(inner) {}
  std::string label() const override { return inner_.label(); }
  PrecisionSpec precision() const override { return inner_.precision(); }
  std::optional<int> step(const Partition& p) override { return inner_.step(p); }
  RealValue value() const override { return inner_.value(); }
  void commit_unit() override { inner_.commit_unit(); }
  std::uint64_t consumed() const override { return inner_.consumed(); }

 private:
  TrajectorySource& inner_;
};

Ciphertext run_encrypt(EncryptSession& session, std::span<const std::uint8_t> plaintext) {
  Ciphertext ct;
  ct.counts.reserve(plaintext.size());
  for (std::size_t i = 0; i < plaintext.size(); ++i) {
    try {
      ct.counts.push_back(session.encrypt_unit(plaintext[i]).count);
    } catch (const Error& e) {
      throw e.with_unit(i);
    }
  }
  return ct;
}

std::vector<std::uint8_t> run_decrypt(DecryptSession& session, const Ciphertext& ciphertext) {
  std::vector<std::uint8_t> out;
  out.reserve(ciphertext.counts.size());
  for (std::size_t i = 0; i < ciphertext.counts.size(); ++i) {
    try {
      out.push_back(static_cast<std::uint8_t>(session.decrypt_unit(ciphertext.counts[i]).symbol));
    } catch (const Error& e) {
      throw e.with_unit(i);
    }
  }
  return out;
}

}  // namespace

Ciphertext encrypt(std::span<const std::uint8_t> plaintext, const CipherKey& key, std::uint64_t aux_seed) {
  if (key.sites < 256) {
    for (auto b : plaintext) {
      if (b >= key.sites) throw Error(ErrorCode::domain, "plaintext byte outside the key's alphabet");
    }
  }
  EncryptSession session(key, aux_seed);
  return run_encrypt(session, plaintext);
}

std::vector<std::uint8_t> decrypt(const Ciphertext& ciphertext, const CipherKey& key) {
  DecryptSession session(key);
  return run_decrypt(session, ciphertext);
}

Ciphertext encrypt_with(TrajectorySource& source, std::span<const std::uint8_t> plaintext, const CipherKey& key,
                        std::uint64_t aux_seed) {
  EncryptSession session(key, std::make_unique<BorrowedSource>(source), aux_seed);
  return run_encrypt(session, plaintext);
}

std::vector<std::uint8_t> decrypt_with(TrajectorySource& source, const Ciphertext& ciphertext,
                                       const CipherKey& key) {
  DecryptSession session(key, std::make_unique<BorrowedSource>(source));
  return run_decrypt(session, ciphertext);
}

}  // namespace kzoom
