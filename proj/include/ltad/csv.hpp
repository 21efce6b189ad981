#pragma once

#include <string>
#include <vector>

#include "ltad/types.hpp"

namespace ltad {

// Parses a numeric CSV into a DataMatrix. A first row that does not parse as
// numbers is treated as a header and skipped. Rows must all have the same
// width ("ragged row N" error, N the 1-based file line); cells must be
// finite numbers. CRLF line ends are accepted.
DataMatrix ingest_csv(const std::string& path);

// Parses CSV text already in memory; `name` only labels error messages.
DataMatrix parse_csv(const std::string& text, const std::string& name = "input");

// Writes X as CSV. Round-trip mode prints with enough digits that
// ingest_csv reproduces the matrix exactly; otherwise 6 significant digits.
void write_matrix_csv(const DataMatrix& X, const std::string& path, bool round_trip = true);

// One CSV field per RFC 4180: quoted only when the content requires it.
std::string csv_field(const std::string& raw);

// Fixed-width-free numeric formatting used in the report tables
// (6 significant digits) and in round-trip mode (shortest exact form).
std::string format_sig6(double v);
std::string format_exact(double v);

}  // namespace ltad
