#include "dca/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "dca/errors.hpp"

namespace dca::harness {

std::vector<CsvRow> parse_csv(std::string_view text, char comment) {
  std::vector<CsvRow> rows;
  std::size_t line = 1;
  std::size_t pos = 0;
  const std::size_t size = text.size();

  while (pos < size) {
    if (comment != '\0' && text[pos] == comment) {
      while (pos < size && text[pos] != '\n') {
        ++pos;
      }
      ++pos;
      ++line;
      continue;
    }
    CsvRow row;
    row.line = line;
    std::string field;
    bool row_done = false;
    while (!row_done) {
      if (pos < size && text[pos] == '"') {
        ++pos;
        for (;;) {
          if (pos >= size) {
            throw DataError("CSV line " + std::to_string(row.line) + ": unterminated quoted field");
          }
          const char c = text[pos++];
          if (c == '"') {
            if (pos < size && text[pos] == '"') {
              field.push_back('"');
              ++pos;
            } else {
              break;
            }
          } else {
            if (c == '\n') {
              ++line;
            }
            field.push_back(c);
          }
        }
      }
      while (pos < size && text[pos] != ',' && text[pos] != '\n' && text[pos] != '\r') {
        field.push_back(text[pos++]);
      }
      row.fields.push_back(std::move(field));
      field.clear();
      if (pos < size && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < size && text[pos] == '\r') {
        ++pos;
      }
      if (pos < size && text[pos] == '\n') {
        ++pos;
      }
      ++line;
      row_done = true;
    }
    const bool blank = row.fields.size() == 1 && row.fields.front().empty();
    if (!blank) {
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') {
      out.push_back('"');
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  if (text.empty()) {
    return false;
  }
  const auto result = std::from_chars(text.data(), text.data() + text.size(), out);
  return result.ec == std::errc() && result.ptr == text.data() + text.size() &&
         std::isfinite(out);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write " + path);
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw DataError("write failed for " + path);
  }
}

}  // namespace dca::harness
