#include "parsim/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "parsim/errors.hpp"

namespace parsim {

namespace {

// One record boundary at a time; quotes toggle comma/newline significance.
std::vector<std::vector<std::string>> split_records(const std::string& text,
                                                    const std::string& origin) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;

  const auto end_field = [&]() {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  const auto end_record = [&]() {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw ParseError(origin + ": stray quote inside an unquoted field (record " +
                           std::to_string(records.size() + 1) + ")");
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') {
          ++i;
        }
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field += c;
    }
  }
  if (in_quotes) {
    throw ParseError(origin + ": unterminated quoted field at end of file");
  }
  if (!field.empty() || field_was_quoted || !record.empty()) {
    end_record();
  }
  return records;
}

std::string trimmed(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string cell_origin(const std::string& origin, std::size_t row,
                        const std::string& column_name, std::size_t column_index) {
  return origin + ", row " + std::to_string(row) + ", column " + std::to_string(column_index) +
         " ('" + column_name + "')";
}

}  // namespace

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("failed while reading '" + path + "'");
  }
  return std::move(buffer).str();
}

CsvTable parse_csv_table(const std::string& text, const std::string& origin) {
  auto records = split_records(text, origin);
  if (records.empty()) {
    throw ParseError(origin + ": empty file, expected a header record");
  }
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw ParseError(origin + ": row " + std::to_string(r + 1) + " has " +
                       std::to_string(records[r].size()) + " fields, expected " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

double parse_number(const std::string& token, const std::string& origin) {
  const std::string lexeme = trimmed(token);
  double value = 0;
  const char* begin = lexeme.data();
  const char* end = begin + lexeme.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || lexeme.empty()) {
    throw ParseError("cannot parse '" + token + "' as a number (" + origin + ")");
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite value '" + token + "' (" + origin + ")");
  }
  return value;
}

Dataset<double> parse_dataset_csv(const std::string& text, const std::string& origin) {
  const CsvTable table = parse_csv_table(text, origin);
  if (table.rows.empty()) {
    throw ParseError(origin + ": no data rows after the header");
  }
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (trimmed(table.header[j]).empty()) {
      throw ParseError(origin + ": header column " + std::to_string(j + 1) + " has no name");
    }
    for (std::size_t i = 0; i < j; ++i) {
      if (table.header[i] == table.header[j]) {
        throw ParseError(origin + ": duplicate header column '" + table.header[j] + "'");
      }
    }
  }

  Dataset<double> data;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    Vector<double> column(static_cast<Index>(table.rows.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      column(static_cast<Index>(r)) =
          parse_number(table.rows[r][j], cell_origin(origin, r + 2, table.header[j], j + 1));
    }
    data.add_column(table.header[j], std::move(column));
  }
  return data;
}

Dataset<double> read_dataset_csv(const std::string& path) {
  return parse_dataset_csv(read_file_bytes(path), path);
}

Matrix<double> parse_points_csv(const std::string& text, Index expected_cols,
                                const std::string& origin) {
  if (trimmed(text).empty()) {
    return Matrix<double>(0, expected_cols);
  }
  const CsvTable table = parse_csv_table(text, origin);
  if (static_cast<Index>(table.header.size()) != expected_cols) {
    throw DimensionMismatchError(origin + ": points have " +
                                 std::to_string(table.header.size()) +
                                 " coordinates, the model has " + std::to_string(expected_cols) +
                                 " coefficients");
  }
  Matrix<double> points(static_cast<Index>(table.rows.size()), expected_cols);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t j = 0; j < table.header.size(); ++j) {
      points(static_cast<Index>(r), static_cast<Index>(j)) =
          parse_number(table.rows[r][j], cell_origin(origin, r + 2, table.header[j], j + 1));
    }
  }
  return points;
}

Matrix<double> read_points_csv(const std::string& path, Index expected_cols) {
  return parse_points_csv(read_file_bytes(path), expected_cols, path);
}

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) {
    return field;
  }
  std::string quoted = "\"";
  for (const char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

}  // namespace parsim
