#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "core/report.hpp"
#include "doctest.h"

using namespace nsprofile;

namespace {

std::size_t count(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (std::size_t pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("CSV emission") {
  CHECK(to_csv({{"t", "v"}, {{1.0, 0.5}}}) == "t,v\n1,0.5\n");
  CHECK(to_csv({{"a,b", "c"}, {}}) == "\"a,b\",c\n");
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1e-300) == "1e-300");
  CHECK(format_real(2.5e-7) == "2.4999999999999999e-07");
  CHECK_THROWS_AS(to_csv({{"t", "v"}, {{1.0, 0.5}, {2.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(to_csv({{"t"}, {{NAN}}}), std::invalid_argument);
  CHECK_THROWS_AS(to_csv({{}, {}}), std::invalid_argument);
}

TEST_CASE("CSV round trip is bit exact") {
  std::mt19937_64 rng(99);
  Table t;
  t.columns = {"t", "x", "y"};
  for (int i = 0; i < 500; ++i) {
    RealVec row;
    while (row.size() < 3) {
      const double x = std::bit_cast<double>(rng());
      if (std::isfinite(x)) row.push_back(x);
    }
    t.rows.push_back(row);
  }
  t.rows.push_back({0.0, -0.0, 5e-324});
  const Table back = parse_csv(to_csv(t));
  REQUIRE(back.columns == t.columns);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::bit_cast<std::uint64_t>(back.rows[i][j]) == std::bit_cast<std::uint64_t>(t.rows[i][j]));
}

TEST_CASE("CSV parsing errors") {
  CHECK_THROWS_WITH_AS(parse_csv(""), doctest::Contains("no data rows"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_csv("t,v\n"), doctest::Contains("no data rows"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv("t,v\n1,2,3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv("t,v\n1,abc\n"), std::invalid_argument);
  const Table crlf = parse_csv("t,v\r\n1,2\r\n");
  CHECK(crlf.rows[0][1] == 2.0);
}

TEST_CASE("SVG emission") {
  SUBCASE("power law is a straight line on log-log axes") {
    PlotSeries s{"p", {}, {}};
    for (double t = 1.0; t <= 1e4; t *= 1.7) {
      s.x.push_back(t);
      s.y.push_back(3.0 * std::pow(t, -0.75));
    }
    SvgPolylines lines;
    to_svg({s}, PlotSpec{}, &lines);
    REQUIRE(lines.size() == 1);
    const auto& pts = lines[0];
    const auto [x0, y0] = pts.front();
    const auto [x1, y1] = pts.back();
    for (const auto& [x, y] : pts) {
      // distance from the chord
      const double d = std::abs((y1 - y0) * x - (x1 - x0) * y + x1 * y0 - y1 * x0) / std::hypot(y1 - y0, x1 - x0);
      CHECK(d <= 0.5);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(to_svg({}, PlotSpec{}), std::invalid_argument);
    CHECK_THROWS_AS(to_svg({{"z", {1.0, 2.0}, {1.0, 0.0}}}, PlotSpec{}), std::invalid_argument);
    CHECK_THROWS_AS(to_svg({{"z", {0.0, 2.0}, {1.0, 1.0}}}, PlotSpec{}), std::invalid_argument);
    PlotSpec lin;
    lin.x_scale = AxisScale::Linear;
    lin.y_scale = AxisScale::Linear;
    CHECK_NOTHROW(to_svg({{"z", {0.0, 2.0}, {-1.0, 0.0}}}, lin));
  }
  SUBCASE("two series give two polylines and two legend entries") {
    const std::string svg = to_svg({{"a", {1, 2, 3}, {1, 2, 3}}, {"b", {1, 2, 3}, {3, 2, 1}}}, PlotSpec{});
    CHECK(count(svg, "<polyline") == 2);
    CHECK(count(svg, "class=\"legend\"") == 2);
    CHECK(count(svg, "class=\"reference\"") == 0);
  }
  SUBCASE("reference slope guide") {
    PlotSpec spec;
    spec.reference_slope = -1.0;
    const std::string svg = to_svg({{"a", {1, 10, 100}, {1, 0.1, 0.01}}}, spec);
    CHECK(count(svg, "class=\"reference\"") == 1);
  }
}

TEST_CASE("series from a table") {
  const std::vector<PlotSeries> s = series_from_table({{"t", "a", "b"}, {{1, 2, 3}, {4, 5, 6}}});
  REQUIRE(s.size() == 2);
  CHECK(s[1].label == "b");
  CHECK(s[1].x == RealVec{1, 4});
  CHECK(s[1].y == RealVec{3, 6});
}

TEST_CASE("FNV-1a") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
}
