#include "ckt/csv.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "ckt/error.hpp"

namespace ckt {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& column) {
  const std::string cell = trim(raw);
  if (cell.empty())
    throw Error(ErrorKind::invalid_input,
                "missing value at row " + std::to_string(row) + ", column '" + column + "'");
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    if (cell == "NA" || cell == "NaN" || cell == "nan")
      throw Error(ErrorKind::invalid_input,
                  "missing value at row " + std::to_string(row) + ", column '" + column + "'");
    throw Error(ErrorKind::invalid_input, "non-numeric value '" + cell + "' at row " +
                                              std::to_string(row) + ", column '" + column + "'");
  }
  return v;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

Sample read_sample(std::istream& in, const ColumnRoles& roles) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::invalid_input, "empty CSV: header row required");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  std::map<std::string, std::size_t> position;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (!position.emplace(header[c], c).second)
      throw Error(ErrorKind::invalid_input, "duplicate header '" + header[c] + "'");

  std::map<std::size_t, Role> used;
  for (const auto& r : roles) {
    auto it = position.find(r.name);
    if (it == position.end())
      throw Error(ErrorKind::invalid_input, "role given for unknown column '" + r.name + "'");
    if (!used.emplace(it->second, r.role).second)
      throw Error(ErrorKind::invalid_input, "column '" + r.name + "' assigned twice");
  }

  std::vector<std::size_t> xi, zi;
  std::vector<std::string> xn, zn;
  for (const auto& [col, role] : used) {
    if (role == Role::conditioned) {
      xi.push_back(col);
      xn.push_back(header[col]);
    } else if (role == Role::conditioning) {
      zi.push_back(col);
      zn.push_back(header[col]);
    }
  }
  if (xi.size() < 2)
    throw Error(ErrorKind::invalid_input, "at least 2 conditioned columns required, got " +
                                              std::to_string(xi.size()));
  if (zi.empty()) throw Error(ErrorKind::invalid_input, "no conditioning column given");

  std::vector<std::vector<double>> x(xi.size()), z(zi.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw Error(ErrorKind::invalid_input, "row " + std::to_string(row) + " has " +
                                                std::to_string(cells.size()) + " fields, header has " +
                                                std::to_string(header.size()));
    for (std::size_t a = 0; a < xi.size(); ++a) x[a].push_back(parse_cell(cells[xi[a]], row, xn[a]));
    for (std::size_t j = 0; j < zi.size(); ++j) z[j].push_back(parse_cell(cells[zi[j]], row, zn[j]));
  }
  return Sample(std::move(x), std::move(z), std::move(xn), std::move(zn), std::move(xi),
                std::move(zi));
}

Sample load_sample(const std::filesystem::path& path, const ColumnRoles& roles) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open '" + path.string() + "'");
  return read_sample(in, roles);
}

Role parse_role(const std::string& word) {
  if (word == "cond" || word == "conditioned") return Role::conditioned;
  if (word == "conditioning" || word == "given") return Role::conditioning;
  if (word == "ignore" || word == "ignored") return Role::ignored;
  throw Error(ErrorKind::invalid_input, "unknown role '" + word + "'");
}

ColumnRoles parse_roles(const std::string& text) {
  ColumnRoles out;
  std::string token;
  std::stringstream ss(text);
  while (ss >> token) {
    std::stringstream parts(token);
    std::string item;
    while (std::getline(parts, item, ',')) {
      if (item.empty()) continue;
      const auto colon = item.rfind(':');
      if (colon == std::string::npos || colon == 0)
        throw Error(ErrorKind::invalid_input, "role token '" + item + "' is not name:role");
      out.push_back({item.substr(0, colon), parse_role(item.substr(colon + 1))});
    }
  }
  return out;
}

}  // namespace ckt
