#include "egin/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "egin/errors.hpp"

namespace egin::io {

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw DomainError("unknown format '" + s + "' (expected csv or json)");
}

std::string extension(Format f) { return f == Format::Csv ? ".csv" : ".json"; }

void Table::add_row(std::vector<Cell> row) {
  require(row.size() == columns.size(), "table " + name + ": row width does not match the header");
  rows.push_back(std::move(row));
}

int Table::column(const std::string& c) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == c) return static_cast<int>(i);
  return -1;
}

double Table::number(std::size_t row, const std::string& col) const {
  const int c = column(col);
  require(c >= 0, "table " + name + ": no column " + col);
  const Cell& v = rows.at(row)[c];
  if (const double* d = std::get_if<double>(&v)) return *d;
  if (const std::int64_t* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw DomainError("table " + name + ": column " + col + " is not numeric");
}

const std::string* Table::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return &v;
  return nullptr;
}

void Table::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata)
    if (k == key) {
      v = value;
      return;
    }
  metadata.emplace_back(key, value);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_double(*d);
  if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return quote(std::get<std::string>(c));
}

std::vector<std::string> split_csv(const std::string& line, std::vector<bool>& quoted) {
  std::vector<std::string> out;
  quoted.clear();
  std::string cur;
  bool in_quotes = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        in_quotes = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_quotes = was_quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      quoted.push_back(was_quoted);
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  quoted.push_back(was_quoted);
  return out;
}

Cell parse_cell(const std::string& s, bool quoted) {
  if (quoted) return s;
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  if (!s.empty() && s.find_first_not_of("-0123456789") == std::string::npos) {
    std::int64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec == std::errc() && r.ptr == s.data() + s.size()) return v;
  }
  double d = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), d);
  if (r.ec == std::errc() && r.ptr == s.data() + s.size()) return d;
  return s;
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  for (const auto& [k, v] : t.metadata) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

Table read_csv(std::istream& is) {
  Table t;
  std::string line;
  bool header = false;
  std::vector<bool> quoted;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header && line[0] == '#') {
      const std::size_t colon = line.find(": ");
      require(colon != std::string::npos, "csv: malformed metadata line: " + line);
      t.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    const auto fields = split_csv(line, quoted);
    if (!header) {
      t.columns = fields;
      header = true;
      continue;
    }
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) row.push_back(parse_cell(fields[i], quoted[i]));
    t.add_row(std::move(row));
  }
  return t;
}

namespace {

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return format_double(*d);  // JSON has no nan/inf literals
  }
  if (const std::int64_t* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json j;
  j["name"] = t.name;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : t.metadata) j["metadata"][k] = v;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    j["rows"].push_back(std::move(r));
  }
  os << j.dump(1) << '\n';
}

Table read_json(std::istream& is) {
  const auto j = nlohmann::ordered_json::parse(is);
  Table t;
  t.name = j.value("name", "");
  for (const auto& [k, v] : j.at("metadata").items()) t.metadata.emplace_back(k, v.get<std::string>());
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) {
      if (c.is_number_integer()) row.emplace_back(c.get<std::int64_t>());
      else if (c.is_number()) row.emplace_back(c.get<double>());
      else row.push_back(parse_cell(c.get<std::string>(), false));
    }
    t.add_row(std::move(row));
  }
  return t;
}

void write(std::ostream& os, const Table& t, Format f) {
  if (f == Format::Csv) write_csv(os, t);
  else write_json(os, t);
}

std::string save(const Table& t, const std::string& dir, Format f) {
  std::filesystem::create_directories(dir.empty() ? "." : dir);
  const std::string path = (std::filesystem::path(dir.empty() ? "." : dir) / (t.name + extension(f))).string();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open " + path + " for writing");
  write(os, t, f);
  return path;
}

Table load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("cannot open " + path);
  Table t = path.size() > 5 && path.substr(path.size() - 5) == ".json" ? read_json(is) : read_csv(is);
  if (t.name.empty()) t.name = std::filesystem::path(path).stem().string();
  return t;
}

}  // namespace egin::io
