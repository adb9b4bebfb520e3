#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace laesim {

/// Floating-point cell, 9 significant digits.
std::string csv_num(double v);

/// Joins cells with commas and terminates with LF. Cells are written as-is;
/// the schemas here never need quoting.
void csv_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace laesim
