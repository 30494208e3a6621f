#pragma once

#include "tvcp/signal.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace tvcp {

/// Parses newline-delimited decimal values, or a single-column CSV whose
/// optional first line is the header "value". Blank lines are ignored. A JSON
/// array, or an object with a theta_hat array (a fit result), is also accepted.
Signal parse_signal(std::string_view text);
Signal read_signal(const std::filesystem::path& path);

/// Changepoint sets travel as JSON arrays of 1-based integers.
ChangepointSet parse_changepoints_json(std::string_view text);
ChangepointSet read_changepoints_json(const std::filesystem::path& path);
std::string changepoints_to_json(const ChangepointSet& s);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace tvcp
