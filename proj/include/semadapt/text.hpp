#pragma once

#include <string>
#include <string_view>

namespace semadapt {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);
/// Parses a full string as a double; throws std::invalid_argument otherwise.
double parse_double(std::string_view text);

}  // namespace semadapt
