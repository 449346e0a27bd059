#pragma once

#include <string>

#include "qsync/mat3.hpp"

namespace qsync {

/// Shortest-footprint decimal with 17 significant digits; round-trips any
/// double exactly. Negative zero is canonicalized to "0".
std::string fmt_double(double x);

/// 6 significant digits, for display labels.
std::string fmt_double6(double x);

/// Complex entry for display: "a", "a+bi" or "a-bi" at 6 significant digits.
std::string fmt_complex6(Complex z);

/// Minimal JSON string escaping (backslash, quote, control characters).
std::string json_escape(const std::string& s);

/// Matrix as nested JSON arrays of [re, im] pairs, row-major, 17 digits.
std::string json_matrix(const Mat3& m);

}  // namespace qsync
