#pragma once

#include <string>
#include <string_view>

namespace disco::csv {

// RFC 4180 field quoting: wraps in quotes when the field contains a comma,
// quote, CR or LF, doubling embedded quotes. Other fields pass through.
std::string field(std::string_view s);

// "%.6g" by default; 17 significant digits round-trips doubles exactly.
std::string number(double v, bool full_precision = false);

}  // namespace disco::csv
