#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kzoom::cli {

/// Process exit codes.
enum Exit : int {
  kOk = 0,
  kConfig = 2,      // bad key, flags or files
  kGeneration = 3,  // degenerate orbit, exhausted return, exhausted external file
  kCiphertext = 4,  // ciphertext does not decrypt under the key
  kAssertion = 5,   // --assert and a statistical check failed
  kUsage = 64,      // unknown flag or malformed command line
};

/// KZOOM_SEED if set and numeric, else the library default.
std::uint64_t default_master_seed();

/// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kzoom::cli
