#include <array>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "kzoom/cipher.hpp"
#include "kzoom/error.hpp"
#include "kzoom/seed.hpp"

namespace kzoom {

namespace {

constexpr std::uint64_t kStreamX0 = 1;
constexpr std::uint64_t kStreamAssociation = 2;

constexpr std::string_view kTextHeader = "kzoom-ct v1 text";
constexpr std::string_view kBinHeader = "kzoom-ct v1 bin";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class Int>
Int parse_int(std::string_view text, std::size_t line, std::string_view field) {
  Int v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::parse,
                "line " + std::to_string(line) + ": bad integer for " + std::string(field) + ": '" +
                    std::string(text) + "'");
  }
  return v;
}

std::string decimal_field(std::string_view text, std::size_t line, std::string_view field) {
  if (!is_decimal_literal(text)) {
    throw Error(ErrorCode::parse, "line " + std::to_string(line) + ": " + std::string(field) +
                                      " is not a decimal literal: '" + std::string(text) + "'");
  }
  return std::string(text);
}

}  // namespace

CipherKey keygen(std::uint64_t seed, const KeyOverrides& o) {
  CipherKey key;
  key.x0 = random_x0(derive_seed(seed, kStreamX0, 0));
  if (o.mu) key.mu = *o.mu;
  if (o.x0) key.x0 = *o.x0;
  if (o.k) key.k = *o.k;
  if (o.sites) key.sites = *o.sites;
  if (o.x_min) key.x_min = *o.x_min;
  if (o.x_max) key.x_max = *o.x_max;
  if (o.n0) key.n0 = *o.n0;
  if (o.n_max) key.n_max = *o.n_max;
  if (o.eta) key.eta = *o.eta;
  if (o.precision) key.precision = *o.precision;
  if (o.order) key.order = *o.order;
  if (o.chain) key.chain = *o.chain;
  if (o.association) {
    key.association = *o.association;
  } else if (key.sites >= 1) {
    key.association.resize(static_cast<std::size_t>(key.sites));
    for (int i = 0; i < key.sites; ++i) key.association[static_cast<std::size_t>(i)] = i + 1;
    std::mt19937_64 rng(derive_seed(seed, kStreamAssociation, 0));
    for (std::size_t i = key.association.size() - 1; i > 0; --i) {
      std::swap(key.association[i], key.association[uniform_below(rng, i + 1)]);
    }
  }
  key.validate();
  return key;
}

std::string key_serialize(const CipherKey& key) {
  std::ostringstream out;
  out << "# kzoom cipher key v1\n"
      << "mu = " << key.mu << '\n'
      << "x0 = " << key.x0 << '\n'
      << "k = " << key.k << '\n'
      << "S = " << key.sites << '\n'
      << "x_min = " << key.x_min << '\n'
      << "x_max = " << key.x_max << '\n'
      << "N0 = " << key.n0 << '\n'
      << "N_max = " << key.n_max << '\n'
      << "eta = " << key.eta << '\n'
      << "precision = " << key.precision.to_string() << '\n'
      << "order = " << to_string(key.order) << '\n'
      << "chain = " << to_string(key.chain) << '\n'
      << "association = ";
  for (std::size_t i = 0; i < key.association.size(); ++i) {
    if (i) out << ',';
    out << key.association[i];
  }
  out << '\n';
  return out.str();
}

CipherKey key_parse(std::string_view text) {
  CipherKey key;
  key.association.clear();
  std::map<std::string, std::size_t, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": expected 'name = value'");
    }
    std::string name(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (seen.count(name)) {
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": duplicate field '" + name + "'");
    }
    seen.emplace(name, line_no);
    try {
      if (name == "mu") {
        key.mu = decimal_field(value, line_no, name);
      } else if (name == "x0") {
        key.x0 = decimal_field(value, line_no, name);
      } else if (name == "k") {
        key.k = parse_int<int>(value, line_no, name);
      } else if (name == "S") {
        key.sites = parse_int<int>(value, line_no, name);
      } else if (name == "x_min") {
        key.x_min = decimal_field(value, line_no, name);
      } else if (name == "x_max") {
        key.x_max = decimal_field(value, line_no, name);
      } else if (name == "N0") {
        key.n0 = parse_int<std::uint32_t>(value, line_no, name);
      } else if (name == "N_max") {
        key.n_max = parse_int<std::uint32_t>(value, line_no, name);
      } else if (name == "eta") {
        key.eta = decimal_field(value, line_no, name);
      } else if (name == "precision") {
        key.precision = PrecisionSpec::parse(value);
      } else if (name == "order") {
        key.order = parse_eval_order(value);
      } else if (name == "chain") {
        key.chain = parse_chain_mode(value);
      } else if (name == "association") {
        while (!value.empty()) {
          auto comma = value.find(',');
          key.association.push_back(parse_int<int>(trim(value.substr(0, comma)), line_no, name));
          value = comma == std::string_view::npos ? std::string_view{} : value.substr(comma + 1);
        }
      } else {
        throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": unknown field '" + name + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::parse && std::string_view(e.what()).find("line ") != std::string_view::npos) throw;
      throw Error(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  for (const char* required : {"mu", "x0", "k", "S", "x_min", "x_max", "N0", "N_max", "eta", "precision",
                               "association"}) {
    if (!seen.count(std::string_view(required))) {
      throw Error(ErrorCode::parse, "missing field '" + std::string(required) + "' (line " +
                                        std::to_string(line_no) + ")");
    }
  }
  key.validate();
  return key;
}

std::string key_fingerprint(const CipherKey& key) {
  const std::string canon = key_serialize(key);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(canon.data(), canon.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::io, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < 8 && i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

void write_ciphertext(std::ostream& out, const Ciphertext& ciphertext, CiphertextFormat format) {
  if (format == CiphertextFormat::text) {
    out << kTextHeader << '\n';
    for (auto c : ciphertext.counts) out << c << '\n';
  } else {
    out << kBinHeader << '\n';
    for (auto c : ciphertext.counts) {
      const char b[4] = {static_cast<char>(c & 0xff), static_cast<char>((c >> 8) & 0xff),
                         static_cast<char>((c >> 16) & 0xff), static_cast<char>((c >> 24) & 0xff)};
      out.write(b, 4);
    }
  }
  if (!out) throw Error(ErrorCode::io, "failed writing ciphertext");
}

Ciphertext read_ciphertext(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorCode::parse, "empty ciphertext file");
  std::string_view h = trim(header);
  Ciphertext ct;
  if (h == kTextHeader) {
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      auto v = trim(line);
      if (v.empty()) continue;
      ct.counts.push_back(parse_int<std::uint32_t>(v, line_no, "count"));
    }
  } else if (h == kBinHeader) {
    std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (rest.size() % 4 != 0) throw Error(ErrorCode::parse, "binary ciphertext length is not a multiple of 4");
    for (std::size_t i = 0; i < rest.size(); i += 4) {
      auto b = [&](std::size_t j) { return std::uint32_t{static_cast<unsigned char>(rest[i + j])}; };
      ct.counts.push_back(b(0) | b(1) << 8 | b(2) << 16 | b(3) << 24);
    }
  } else {
    throw Error(ErrorCode::parse, "unrecognised ciphertext header '" + header + "'");
  }
  return ct;
}

}  // namespace kzoom
