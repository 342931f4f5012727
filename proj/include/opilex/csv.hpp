#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace opilex {

// Minimal CSV: comma-separated, optional double-quoting, no embedded
// newlines. Enough for the review / lexicon / output files this project
// defines, all of which it also writes.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

// '.' decimal separator, 6 significant digits (the output-file contract).
std::string format_number(double value);

}  // namespace opilex
