#pragma once

#include <string>
#include <vector>

#include "parsim/dataset.hpp"
#include "parsim/types.hpp"

namespace parsim {

// Raw RFC-4180 table: a header record plus string cells, before any
// numeric conversion. Quoted fields may contain commas, doubled quotes,
// and line breaks; records end at unquoted LF or CRLF.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Reads a whole file into memory; throws IoError when it cannot be opened.
std::string read_file_bytes(const std::string& path);

// Splits CSV text into records. origin names the source in error messages.
CsvTable parse_csv_table(const std::string& text, const std::string& origin);

// Strict full-token numeric conversion; rejects trailing junk and
// non-finite values with a ParseError that carries the cell's origin.
double parse_number(const std::string& token, const std::string& origin);

// Parses a header-first numeric CSV into named columns. Cells must be
// finite numbers; errors name the row and column of the offending cell.
Dataset<double> parse_dataset_csv(const std::string& text, const std::string& origin);
Dataset<double> read_dataset_csv(const std::string& path);

// Parses a numeric CSV of coefficient points, one point per row, with
// exactly expected_cols columns. A byte-empty or header-only file yields
// a 0-row matrix.
Matrix<double> parse_points_csv(const std::string& text, Index expected_cols,
                                const std::string& origin);
Matrix<double> read_points_csv(const std::string& path, Index expected_cols);

// Shortest text that survives a text -> double -> text round trip (17
// significant digits).
std::string format_number(double value);

// Quotes a field when RFC 4180 requires it (commas, quotes, line breaks).
std::string csv_escape(const std::string& field);

}  // namespace parsim
