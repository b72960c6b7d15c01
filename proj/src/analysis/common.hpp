#pragma once

#include <cstdint>
#include <exception>
#include <string>
#include <vector>

#include <omp.h>

#include "kzoom/error.hpp"
#include "kzoom/real.hpp"
#include "kzoom/seed.hpp"

namespace kzoom::analysis::detail {

// Seed streams, one per experiment family.
inline constexpr std::uint64_t kStreamHistogram = 0x4849;
inline constexpr std::uint64_t kStreamReturnMap = 0x524d;
inline constexpr std::uint64_t kStreamKac = 0x4b41;
inline constexpr std::uint64_t kStreamPlaintext = 0x5054;
inline constexpr std::uint64_t kStreamAux = 0x4155;
inline constexpr std::uint64_t kStreamBaseline = 0x424c;
inline constexpr std::uint64_t kStreamBattery = 0x4254;

inline std::string attempt_x0(std::uint64_t master, std::uint64_t stream, std::size_t index, int attempt) {
  return random_x0(derive_seed(derive_seed(master, stream, index), 0, static_cast<std::uint64_t>(attempt)));
}

inline bool is_orbit_failure(const Error& e) {
  return e.code() == ErrorCode::degenerate_orbit || e.code() == ErrorCode::zoom_exhausted;
}

/// floor(y * n) clamped to n - 1, exact for decimal values.
inline std::size_t bucket_of(const RealValue& y, std::size_t n) {
  std::size_t b = 0;
  if (y.is_decimal()) {
    mpz_class q = y.as_decimal().units() * static_cast<unsigned long>(n) / pow10(y.as_decimal().digits());
    b = static_cast<std::size_t>(q.get_ui());
  } else {
    b = static_cast<std::size_t>(y.as_binary64() * static_cast<double>(n));
  }
  return b < n ? b : n - 1;
}

/// OpenMP loop over [0, n). Exceptions are captured per index and the one
/// with the lowest index is rethrown, matching what a serial loop reports.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace kzoom::analysis::detail
