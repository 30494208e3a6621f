#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tvcp::cli {

/// Exit codes: 0 success, 2 input/validation error, 3 convergence failure.
inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 2;
inline constexpr int exit_convergence = 3;

/// Runs one command line (without the program name). Results go to files or
/// `out`; diagnostics go to `err` as one JSON object per line.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Build identifier recorded in every manifest.
std::string version_string();

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

}  // namespace tvcp::cli
