#pragma once

#include <string>
#include <vector>

namespace chemfront {

/// Shortest round-trip decimal formatting (std::to_chars); parsing the
/// result recovers the exact double.
std::string format_double(double x);

std::string csv_row(const std::vector<std::string>& cells);

}  // namespace chemfront
