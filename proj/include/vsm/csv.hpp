#pragma once

#include <string>
#include <vector>

namespace vsm {

// RFC-4180-ish: quoted fields may contain commas, quotes (doubled) and
// newlines. Rows are returned without the trailing newline.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::string csv_quote(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);

} // namespace vsm
