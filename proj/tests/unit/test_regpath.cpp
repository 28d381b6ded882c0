#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "quadreg/errors.hpp"
#include "quadreg/qot.hpp"
#include "quadreg/regpath.hpp"

using namespace quadreg;

TEST_CASE("two-point simplex path") {
  const auto path = trace_path_exact(PathPolytope::simplex(2), {0, 1});
  REQUIRE(path.segments.size() == 2);
  const auto& s0 = path.segments[0];
  CHECK(s0.eta_lo == 0);
  REQUIRE(s0.eta_hi);
  CHECK(*s0.eta_hi == 1);
  CHECK(s0.x0 == RatVec{make_rational(1, 2), make_rational(1, 2)});
  CHECK(s0.d == RatVec{make_rational(1, 2), make_rational(-1, 2)});
  CHECK_FALSE(path.segments[1].eta_hi);
  CHECK(path.eta_stationary == 1);
  CHECK(path.at(5) == RatVec{1, 0});
  CHECK(path.delta_min_sq == make_rational(1, 2));
  CHECK(path.delta_max_sq == 1);
  CHECK_FALSE(path.fallback_used);
}

TEST_CASE("property: simplex paths match the KKT oracle on a dense eta grid") {
  std::mt19937_64 rng(30);
  for (int k = 0; k < 25; ++k) {
    const std::size_t d = 1 + static_cast<std::size_t>(k % 6);
    const auto c = oracle::random_qvec(rng, d);
    const auto path = trace_path_exact(PathPolytope::simplex(d), c);
    for (int j = 0; j <= 40; ++j) {
      const Rational eta = (path.eta_stationary + 1) * make_rational(j, 30);
      CHECK(path.at(eta) == oracle::simplex_projection(scale(c, -eta)));
      if (j > 0) CHECK(softmin(c, eta) == path.at(eta));
    }
    // Segments tile [0, inf) contiguously.
    for (std::size_t s = 1; s < path.segments.size(); ++s) CHECK(*path.segments[s - 1].eta_hi == path.segments[s].eta_lo);
  }
}

TEST_CASE("property: transport paths match the subset oracle") {
  std::mt19937_64 rng(31);
  const auto g3 = PathPolytope::transport(3);
  const std::vector<oracle::QVec> verts(g3.polytope.vertices().begin(), g3.polytope.vertices().end());
  for (int k = 0; k < 8; ++k) {
    const auto c = oracle::random_qvec(rng, 9);
    const auto path = trace_path_exact(g3, c);
    for (int j = 0; j <= 12; ++j) {
      const Rational eta = (path.eta_stationary + 1) * make_rational(j, 10);
      CHECK(path.at(eta) == oracle::project(verts, scale(c, -eta)));
    }
    CHECK(check_c_monotone(path).monotone);
  }
}

TEST_CASE("Birkhoff path for N = 2") {
  const auto path = trace_path_exact(PathPolytope::birkhoff(2), {0, 1, 1, 0});
  CHECK(path.at(0) == RatVec{make_rational(1, 2), make_rational(1, 2), make_rational(1, 2), make_rational(1, 2)});
  CHECK(path.at(100) == RatVec{1, 0, 0, 1});
}

TEST_CASE("counterexample path loses and regains entry (1,1)") {
  const auto path = trace_path_exact(PathPolytope::transport(5), counterexample_cost().cost.flat());
  CHECK_FALSE(path.fallback_used);
  const auto cm = check_c_monotone(path);
  CHECK_FALSE(cm.monotone);
  REQUIRE(cm.witness);
  CHECK(cm.witness->index == 0);
  CHECK(cm.witness->eta_lost < cm.witness->eta_regained);
  // The final segment is the scaled identity.
  RatVec diag = zeros(25);
  for (std::size_t k = 0; k < 5; ++k) diag[k * 6] = make_rational(1, 5);
  CHECK(path.at(path.eta_stationary + 10) == diag);
}

TEST_CASE("eta_to_delta and delta_to_eta invert each other") {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 10; ++k) {
    const auto c = oracle::random_qvec(rng, 4);
    const auto path = trace_path_exact(PathPolytope::simplex(4), c);
    CHECK(eta_to_delta(path, 0) == doctest::Approx(path.delta_min));
    if (path.eta_stationary == 0) continue;
    const Rational eta = path.eta_stationary / 2;
    const double delta = eta_to_delta(path, eta);
    CHECK(delta == doctest::Approx(std::sqrt(norm_sq(path.at(eta)).get_d())));
    CHECK(delta_to_eta(path, delta) == doctest::Approx(eta.get_d()).epsilon(1e-9));
    CHECK_THROWS_AS(delta_to_eta(path, path.delta_max + 1), DeltaOutOfRange);
  }
}

TEST_CASE("Lagrangian and Eulerian solvers agree") {
  const VPolytope s = unit_simplex(3);
  const RatVec c{0, make_rational(1, 2), 1};
  const auto path = trace_path_exact(PathPolytope::simplex(3), c);
  const Rational eta(3, 4);
  const auto x = path.at(eta);
  const auto xl = solve_lagrangian(s, to_double(c), 0.75);
  for (std::size_t i = 0; i < 3; ++i) CHECK(xl[i] == doctest::Approx(x[i].get_d()));
  const auto xe = solve_eulerian(s, c, std::sqrt(norm_sq(x).get_d()), 1e-12);
  for (std::size_t i = 0; i < 3; ++i) CHECK(xe[i] == doctest::Approx(x[i].get_d()).epsilon(1e-6));
  CHECK_THROWS_AS(solve_eulerian(s, c, 0.1), DeltaOutOfRange);
  CHECK_THROWS_AS(solve_eulerian(s, c, 2.0), DeltaOutOfRange);
}

TEST_CASE("softmin basics") {
  CHECK(softmin(RatVec{1, 1, 1}, 5) == RatVec(3, make_rational(1, 3)));
  CHECK(softmin(RatVec{0, 2}, 1) == RatVec{1, 0});
  CHECK(softmin(RatVec{0, 1}, make_rational(1, 2)) == RatVec{make_rational(3, 4), make_rational(1, 4)});
  const std::vector<double> cf{0.0, 1.0};
  const auto xf = softmin(cf, 0.5);
  CHECK(xf[0] == doctest::Approx(0.75));
  const auto r = softmin_delta_range({0, 0, 1});
  CHECK(r.delta_min_sq == make_rational(1, 3));
  CHECK(r.delta_max_sq == make_rational(1, 2));
}
