#pragma once

#include <string>

#include "wmcen/types.hpp"

namespace wmcen {

/// Parses a rectangular delimited numeric file. Errors name the offending
/// line and column.
Matrix load_csv(const std::string& path, bool has_header, char delimiter = ',');

/// Writes a matrix with round-trip-exact number formatting.
void save_csv(const std::string& path, const Matrix& m, char delimiter = ',');

/// Round-trip-exact rendering of a double (shortest form that parses back
/// to the same value).
std::string format_double(double v);

}  // namespace wmcen
