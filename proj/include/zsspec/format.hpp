#pragma once

#include <string>

namespace zsspec {

/// Shortest decimal string that round-trips to the same double.
/// Non-finite values are written as "inf", "-inf" and "nan".
std::string format_double(double value);

}  // namespace zsspec
