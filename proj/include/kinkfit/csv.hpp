#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "kinkfit/dataset.hpp"

namespace kinkfit {

// CSV dialect:
//   phi,F
//   <phi>,<F>
//   ...
// Blank lines and lines starting with '#' are ignored anywhere in the file.
// Numbers are dot-decimal with an optional exponent. The writer emits 17
// significant digits, so reading back what was written is lossless.

/// Throws Error with MalformedHeader, MalformedRecord or NonFiniteValue; the
/// last two carry the 1-based line number.
DataSet read_dataset(std::istream& in);
DataSet read_dataset(std::string_view text);

void write_dataset(const DataSet& data, std::ostream& out);
std::string write_dataset(const DataSet& data);

/// Shortest-round-trip-safe formatting used by the writer (%.17g, C locale).
std::string format_double(double v);

}  // namespace kinkfit
