#include "vsm/csv.hpp"

#include "vsm/errors.hpp"

namespace vsm {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
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
        in_quotes = true;
        row_started = true;
        break;
      case ',':
        row.push_back(field);
        field.clear();
        row_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_started || !field.empty()) {
          row.push_back(field);
          rows.push_back(row);
        }
        field.clear();
        row.clear();
        row_started = false;
        break;
      default:
        field += c;
        row_started = true;
    }
  }
  if (in_quotes) throw FormatError("unterminated quote in CSV");
  if (row_started || !field.empty()) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

std::string csv_quote(const std::string& field) {
  bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_quote(fields[i]);
  }
  return out;
}

} // namespace vsm
