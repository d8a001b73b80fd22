#include <cmath>
#include <filesystem>
#include <sstream>

#include <doctest.h>

#include "egin/errors.hpp"
#include "egin/io.hpp"

using namespace egin;

namespace {

io::Table sample_table() {
  io::Table t;
  t.name = "roundtrip";
  t.metadata = {{"command", "overlaps mc --z \"0,1\""}, {"seed", "17"}};
  t.columns = {"label", "x", "count"};
  t.add_row({std::string("a, \"quoted\" value"), 0.1, std::int64_t{3}});
  t.add_row({std::string("plain"), 1e-300, std::int64_t{-12}});
  t.add_row({std::string(""), 2.0, std::int64_t{0}});
  t.add_row({std::string("x"), std::nan(""), std::int64_t{1}});
  return t;
}

void check_same(const io::Table& a, const io::Table& b) {
  CHECK(a.metadata == b.metadata);
  CHECK(a.columns == b.columns);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t r = 0; r < a.rows.size(); ++r)
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
      const auto& x = a.rows[r][c];
      const auto& y = b.rows[r][c];
      REQUIRE(x.index() == y.index());
      if (const double* d = std::get_if<double>(&x)) {
        const double e = std::get<double>(y);
        CHECK(((std::isnan(*d) && std::isnan(e)) || *d == e));
      } else {
        CHECK(x == y);
      }
    }
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("doubles keep a decimal point and round-trip exactly") {
  CHECK(io::format_double(2.0) == "2.0");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv round trip") {
  const auto t = sample_table();
  std::stringstream ss;
  io::write_csv(ss, t);
  CHECK(ss.str().rfind("# command: ", 0) == 0);
  check_same(t, io::read_csv(ss));
}

TEST_CASE("json round trip") {
  const auto t = sample_table();
  std::stringstream ss;
  io::write_json(ss, t);
  check_same(t, io::read_json(ss));
}

TEST_CASE("save and load") {
  const auto dir = std::filesystem::temp_directory_path() / "egin_io_test";
  std::filesystem::create_directories(dir);
  for (io::Format f : {io::Format::Csv, io::Format::Json}) {
    const std::string path = io::save(sample_table(), dir.string(), f);
    CHECK(path.ends_with(io::extension(f)));
    check_same(sample_table(), io::load(path));
  }
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(io::parse_format("xml"), DomainError);
}

}
