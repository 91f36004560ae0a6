#pragma once

#include <string>
#include <vector>

namespace tvqc {

/// Parses `start:stop:count` (inclusive endpoints, count >= 1), a comma list
/// or a single number. Throws UsageError with the offending text.
std::vector<double> parse_grid(const std::string& text);

/// Comma-separated integers.
std::vector<int> parse_int_list(const std::string& text);

/// Comma-separated names, whitespace trimmed, empty items rejected.
std::vector<std::string> parse_name_list(const std::string& text);

} // namespace tvqc
