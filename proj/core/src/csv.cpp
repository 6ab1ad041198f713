#include "roadlpp/csv.hpp"

#include <istream>

#include "roadlpp/errors.hpp"

namespace roadlpp::csv {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string t = trim(field);
  if (t.empty()) return false;
  try {
    std::size_t pos = 0;
    out = std::stod(t, &pos);
    return pos == t.size();
  } catch (...) {
    return false;
  }
}

std::size_t Table::require_column(const std::string& name) const {
  auto it = column.find(name);
  if (it == column.end()) throw SchemaError("CSV missing column '" + name + "'");
  return it->second;
}

Table read_table(std::istream& in) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("CSV input is empty");
  table.header = split_line(line);
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    table.header[i] = trim(table.header[i]);
    table.column[table.header[i]] = i;
  }
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    table.rows.push_back(split_line(line));
  }
  return table;
}

}  // namespace roadlpp::csv
