#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace roadlpp::csv {

/// Splits one CSV line on unquoted commas; quotes are stripped.
std::vector<std::string> split_line(const std::string& line);

std::string trim(const std::string& s);

/// Parses a full double from the (trimmed) field; false on empty/garbage.
bool parse_double(const std::string& field, double& out);

struct Table {
  std::vector<std::string> header;
  std::map<std::string, std::size_t> column;  // header name -> index
  std::vector<std::vector<std::string>> rows;

  bool has_column(const std::string& name) const { return column.count(name) > 0; }
  /// Index of a mandatory column; throws SchemaError when absent.
  std::size_t require_column(const std::string& name) const;
};

/// Reads a whole CSV with a header row; blank lines are skipped.
Table read_table(std::istream& in);

}  // namespace roadlpp::csv
