#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "ckt/sample.hpp"

namespace ckt {

// Splits one CSV record. Double-quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(const std::string& line);

// Reads a header-first CSV and keeps the columns named in `roles`; columns not
// named there are ignored and never parsed. Errors cite the 1-based data row
// and the column name.
Sample read_sample(std::istream& in, const ColumnRoles& roles);
Sample load_sample(const std::filesystem::path& path, const ColumnRoles& roles);

// "name:role" tokens, comma or whitespace separated. Roles: cond|conditioned,
// conditioning|given, ignore|ignored.
ColumnRoles parse_roles(const std::string& text);
Role parse_role(const std::string& word);

}  // namespace ckt
