#pragma once

#include <iosfwd>
#include <string>

#include "wgof/types.hpp"

namespace wgof {

/// Reads `time,delta` rows. Blank lines and lines starting with '#' are
/// skipped; a first non-comment line that does not start with a number is
/// taken as a header. Throws DataError naming the offending line for
/// malformed rows, nonpositive or non-finite times, delta outside {0, 1},
/// and for input without data rows.
CensoredSample read_dataset(std::istream& in);

/// read_dataset on a file; DataError if it cannot be opened.
CensoredSample ingest(const std::string& path);

/// Writes a header and one row per observation with 17 significant digits,
/// so read_dataset(write_dataset(s)) reproduces s exactly.
void write_dataset(std::ostream& out, const CensoredSample& sample);

}  // namespace wgof
