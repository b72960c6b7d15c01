#include "kzoom/error.hpp"

namespace kzoom {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::degenerate_orbit: return "DegenerateOrbit";
    case ErrorCode::zoom_exhausted: return "ZoomExhausted";
    case ErrorCode::domain: return "DomainError";
    case ErrorCode::validation: return "ValidationError";
    case ErrorCode::parse: return "ParseError";
    case ErrorCode::return_exhausted: return "ReturnExhausted";
    case ErrorCode::invalid_ciphertext: return "InvalidCiphertext";
    case ErrorCode::io: return "IOError";
    case ErrorCode::too_few_bits: return "TooFewBits";
    case ErrorCode::expected_too_small: return "ExpectedTooSmall";
    case ErrorCode::zero_variance: return "ZeroVariance";
    case ErrorCode::insufficient_returns: return "InsufficientReturns";
    case ErrorCode::external_file_exhausted: return "ExternalFileExhausted";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
  }
  return "Error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

Error Error::with_iteration(std::uint64_t t) const {
  Error e(code_, std::string(what()).substr(to_string(code_).size() + 2) + " (iteration " +
                     std::to_string(t) + ")");
  e.iteration_ = t;
  e.unit_ = unit_;
  return e;
}

Error Error::with_unit(std::uint64_t u) const {
  Error e(code_, std::string(what()).substr(to_string(code_).size() + 2) + " (unit " +
                     std::to_string(u) + ")");
  e.iteration_ = iteration_;
  e.unit_ = u;
  return e;
}

}  // namespace kzoom
