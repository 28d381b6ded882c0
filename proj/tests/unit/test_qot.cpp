#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "quadreg/birkhoff.hpp"
#include "quadreg/errors.hpp"
#include "quadreg/polytope.hpp"
#include "quadreg/qot.hpp"

using namespace quadreg;

namespace {

// The stated eta = 2.5 coupling of the 5 x 5 counterexample.
RatVec stated_gamma() {
  RatVec g = zeros(25);
  for (std::size_t k = 1; k < 5; ++k) {
    g[k] = g[k * 5] = oracle::decimal("0.05");
    g[k * 6] = oracle::decimal("0.15");
  }
  return g;
}

}  // namespace

TEST_CASE("make_problem validates the shape") {
  CHECK_THROWS_AS(make_problem(RatMat(2, 3)), std::invalid_argument);
  CHECK(make_problem(RatMat(3, 3)).n == 3);
}

TEST_CASE("counterexample data") {
  const auto p = counterexample_cost();
  CHECK(p.cost(0, 0) == oracle::decimal("-1.1"));
  CHECK(p.cost(0, 3) == -1);
  CHECK(p.cost(2, 2) == oracle::decimal("-1.1"));
  CHECK(p.cost(2, 3) == 0);
  CHECK(counterexample_gamma().flat() == stated_gamma());
  CHECK(counterexample_potentials().f[0] == oracle::decimal("-0.575"));
  CHECK(counterexample_potentials().g[1] == oracle::decimal("-0.175"));
  CHECK(has_uniform_marginals(counterexample_gamma()));
}

TEST_CASE("qot_target scaling") {
  const auto p = counterexample_cost();
  CHECK(qot_target(p, make_rational(5, 2)) == scale(p.cost.flat(), make_rational(-1, 5)));
}

TEST_CASE("solve_qot reproduces the stated coupling at eta = 2.5 and the diagonal at eta = 100") {
  const auto p = counterexample_cost();
  const auto g = solve_qot(p, 2.5, 1e-9);
  const auto ref = stated_gamma();
  for (std::size_t k = 0; k < 25; ++k) CHECK(std::abs(g.weights[k] - ref[k].get_d()) <= 1e-8);
  const auto g100 = solve_qot(p, 100.0, 1e-9);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(g100(i, j) - (i == j ? 0.2 : 0.0)) <= 1e-8);
  }
  CHECK(has_uniform_marginals(g, 1e-9));
  CHECK(solve_qot_exact(p, make_rational(5, 2)).flat() == ref);
}

TEST_CASE("the stated coupling is the exact projection of -0.2 c, not of -0.1 c") {
  const auto p = counterexample_cost();
  const auto poly = transport_polytope(5);
  CHECK(variational_inequality_residual(poly, scale(p.cost.flat(), make_rational(-1, 5)), stated_gamma()).value <= 0);
  CHECK(variational_inequality_residual(poly, scale(p.cost.flat(), make_rational(-1, 10)), stated_gamma()).value ==
        make_rational(13, 500));
}

TEST_CASE("cost shifts leave the coupling unchanged") {
  const auto p = counterexample_cost();
  const auto q = shifted(p, 7);
  CHECK(q.cost(1, 2) == 7);
  CHECK(solve_qot_exact(q, make_rational(5, 2)) == solve_qot_exact(p, make_rational(5, 2)));
}

TEST_CASE("dual certificate reconstruction") {
  const auto p = counterexample_cost();
  const auto check = verify_dual_certificate(p, make_rational(5, 2), counterexample_potentials());
  CHECK(check.marginals_ok);
  CHECK(check.gamma.flat() == stated_gamma());
  // Perturbed potentials break the marginals.
  auto pot = counterexample_potentials();
  pot.f[0] += make_rational(1, 100);
  CHECK_FALSE(verify_dual_certificate(p, make_rational(5, 2), pot).marginals_ok);

  const std::vector<double> f{-0.575, -0.175, -0.175, -0.175, -0.175};
  const auto cf = verify_dual_certificate(p, 2.5, f, f, 1e-12);
  CHECK(cf.marginals_ok);
  CHECK(cf.gamma(1, 1) == doctest::Approx(0.15));
}

TEST_CASE("solve_qot rejects bad input") {
  CHECK_THROWS_AS(solve_qot(counterexample_cost(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_qot(make_problem(RatMat(7, 7)), 1.0), SizeLimit);
}

TEST_CASE("weight curve: parallel equals serial and has the expected shape") {
  const auto p = counterexample_cost();
  const auto grid = default_reg_grid();
  REQUIRE(grid.size() == 100);
  CHECK(grid.front() == doctest::Approx(0.005));
  CHECK(grid.back() == doctest::Approx(0.5));
  const std::vector<double> small(grid.begin(), grid.begin() + 50);
  const auto a = weight_curve(p, 0, 0, small);
  const auto b = weight_curve_serial(p, 0, 0, small);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].weight == b[k].weight);
  CHECK(a[0].weight == doctest::Approx(0.2));
  CHECK(std::abs(a[39].weight) <= 1e-8);
  CHECK_THROWS_AS(weight_curve(p, 5, 0, small), std::out_of_range);
}

TEST_CASE("support scan finds the regained entry") {
  const auto rep = support_monotonicity_scan(counterexample_cost(), {0.5, 2.5, 10, 100});
  CHECK_FALSE(rep.monotone);
  REQUIRE(rep.violation);
  CHECK(rep.violation->i == 0);
  CHECK(rep.violation->j == 0);
  CHECK(rep.violation->eta_prev == 2.5);
  CHECK(rep.violation->eta_next == 10);
  // A 3 x 3 problem lives on a monotone polytope.
  RatMat c(3, 3);
  c(0, 1) = c(1, 2) = 1;
  c(2, 0) = 2;
  CHECK(support_monotonicity_scan(make_problem(c), {0.1, 0.5, 1, 5, 20}).monotone);
}
