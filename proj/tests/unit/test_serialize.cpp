#include <doctest.h>

#include "quadreg/errors.hpp"
#include "quadreg/serialize.hpp"

using namespace quadreg;

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0, 4) == "0.3333");
}

TEST_CASE("parse_matrix_json accepts strings and numbers exactly") {
  const auto m = parse_matrix_json(R"([["-11/10", -1], [-1.1, "0.05"]])");
  REQUIRE(m.rows() == 2);
  CHECK(m(0, 0) == make_rational(-11, 10));
  CHECK(m(0, 1) == -1);
  CHECK(m(1, 0) == make_rational(-11, 10));
  CHECK(m(1, 1) == make_rational(1, 20));
  const auto flat = parse_matrix_json(R"([1, 2, 3, 4])");
  CHECK(flat.rows() == 2);
  CHECK(flat(1, 0) == 3);
  CHECK_THROWS_AS(parse_matrix_json("[1, 2, 3]"), ParseError);
  CHECK_THROWS_AS(parse_matrix_json("[[1, 2], [3]]"), ParseError);
  CHECK_THROWS_AS(parse_matrix_json("not json"), ParseError);
  CHECK_THROWS_AS(parse_vector_json(R"([true])"), ParseError);
  CHECK(parse_vector_json(R"(["1/3", 2])") == RatVec{make_rational(1, 3), 2});
}

TEST_CASE("rational JSON output") {
  CHECK(to_json(RatVec{make_rational(1, 2), -3}).dump() == R"(["1/2","-3"])");
  CHECK(to_json(RatMat::identity(2)).dump() == R"([["1","0"],["0","1"]])");
}

TEST_CASE("path JSON and grid CSV") {
  const auto path = trace_path_exact(PathPolytope::simplex(2), {0, 1});
  const auto j = path_to_json(path);
  CHECK(j["segments"].size() == 2);
  CHECK(j["segments"][0]["eta_hi"] == "1");
  CHECK(j["segments"][1]["eta_hi"] == "inf");
  CHECK(j["segments"][1]["support"].dump() == "[0]");
  CHECK(j["eta_stationary"] == "1");
  const auto csv = path_grid_csv(path, {0, make_rational(1, 2)});
  CHECK(csv == "eta,delta,coord_0,coord_1\n0,0.707106781187,0.5,0.5\n0.5,0.790569415042,0.75,0.25\n");
}

TEST_CASE("scan JSON uses 1-based entries") {
  SupportScanReport r;
  r.monotone = false;
  r.violation = SupportViolation{2.5, 10, 0, 0};
  CHECK(scan_to_json(r)["violation"]["entry"].dump() == "[1,1]");
}

TEST_CASE("weight curve CSV header") {
  CHECK(weight_curve_csv({{0.005, 0.2}}) == "inv_two_eta,weight\n0.005,0.2\n");
}
