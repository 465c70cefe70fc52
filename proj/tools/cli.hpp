#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smartskin::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kContractRefusal = 3,
  kPlantError = 4,
};

/// Runs the `smartskin` command line; argv[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Path of the calibrated configuration shipped with the sources.
std::string default_config_path();

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

}  // namespace smartskin::cli
