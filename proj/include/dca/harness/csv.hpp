#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dca::harness {

/// One parsed CSV record and the (1-based) line it started on.
struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

/// RFC 4180 reader: comma separated, double-quote escaping, quoted fields may
/// span lines, CRLF or LF endings. Lines starting with `comment` (when nonzero)
/// outside quotes are skipped. Throws DataError on an unterminated quote.
std::vector<CsvRow> parse_csv(std::string_view text, char comment = '\0');

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Strict full-string parse; returns false on trailing garbage or overflow.
bool parse_double(std::string_view text, double& out);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace dca::harness
