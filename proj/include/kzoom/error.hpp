#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kzoom {

enum class ErrorCode {
  degenerate_orbit,
  zoom_exhausted,
  domain,
  validation,
  parse,
  return_exhausted,
  invalid_ciphertext,
  io,
  too_few_bits,
  expected_too_small,
  zero_variance,
  insufficient_returns,
  external_file_exhausted,
  index_out_of_range,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library. `code()` tells callers which
/// contract was broken; `iteration()` and `unit()` locate the failure inside
/// an orbit or a message when that makes sense.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::uint64_t> iteration() const noexcept { return iteration_; }
  std::optional<std::uint64_t> unit() const noexcept { return unit_; }

  Error with_iteration(std::uint64_t t) const;
  Error with_unit(std::uint64_t u) const;

 private:
  ErrorCode code_;
  std::optional<std::uint64_t> iteration_;
  std::optional<std::uint64_t> unit_;
};

}  // namespace kzoom
