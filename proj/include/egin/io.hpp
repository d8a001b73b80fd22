#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

// Tabular output with a metadata header. CSV files start with '#'-prefixed
// "key: value" lines followed by a header row; doubles are written with 17
// significant digits (always with a '.' or exponent so they read back as
// doubles), integers as bare digits, strings double-quoted. JSON mirrors the
// same schema as {"metadata": {...}, "columns": [...], "rows": [[...], ...]}.

namespace egin::io {

using Cell = std::variant<double, std::int64_t, std::string>;
using Metadata = std::vector<std::pair<std::string, std::string>>;

enum class Format { Csv, Json };

Format parse_format(const std::string& s);
std::string extension(Format f);

struct Table {
  std::string name;  // file stem, e.g. "fig3_left"
  Metadata metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  int column(const std::string& name) const;  // -1 when absent
  double number(std::size_t row, const std::string& col) const;
  const std::string* meta(const std::string& key) const;
  void set_meta(const std::string& key, const std::string& value);
};

std::string format_double(double v);

void write_csv(std::ostream& os, const Table& t);
Table read_csv(std::istream& is);
void write_json(std::ostream& os, const Table& t);
Table read_json(std::istream& is);

void write(std::ostream& os, const Table& t, Format f);
/// Writes dir/name.ext and returns the path.
std::string save(const Table& t, const std::string& dir, Format f);
Table load(const std::string& path);

}  // namespace egin::io
