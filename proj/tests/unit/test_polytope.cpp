#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles.hpp"
#include "quadreg/errors.hpp"
#include "quadreg/polytope.hpp"

using namespace quadreg;

namespace {

std::vector<RatVec> random_points(std::mt19937_64& rng, std::size_t m, std::size_t d) {
  std::vector<RatVec> pts;
  for (std::size_t i = 0; i < m; ++i) pts.push_back(oracle::random_qvec(rng, d));
  return pts;
}

}  // namespace

TEST_CASE("VPolytope deduplicates and validates") {
  const VPolytope p({{0, 0}, {1, 0}, {0, 0}});
  CHECK(p.size() == 2);
  CHECK(p.dim() == 2);
  CHECK(p.vertices_f() == std::vector<double>{0, 0, 1, 0});
  CHECK_THROWS_AS(VPolytope(std::vector<RatVec>{}), std::invalid_argument);
  CHECK_THROWS_AS(VPolytope({{0, 0}, {1}}), std::invalid_argument);
}

TEST_CASE("FaceRef sorts, deduplicates and validates indices") {
  const auto s = unit_simplex(3);
  const FaceRef f(s, {2, 0, 2});
  CHECK(f.indices() == std::vector<std::size_t>{0, 2});
  CHECK_THROWS_AS(FaceRef(s, {5}), std::out_of_range);
  CHECK_THROWS_AS(FaceRef(s, {}), std::invalid_argument);
  CHECK(FaceRef::whole(s).size() == 3);
}

TEST_CASE("affine_projection of the origin onto simplex faces is the barycentre") {
  const auto s = unit_simplex(4);
  for (const auto& f : simplex_faces(s)) {
    const auto x = affine_projection_origin(f);
    const Rational w(1, static_cast<long>(f.size()));
    for (std::size_t i = 0; i < 4; ++i) {
      const bool in = std::find(f.indices().begin(), f.indices().end(), i) != f.indices().end();
      CHECK(x[i] == (in ? w : Rational(0)));
    }
    CHECK(relint_contains(f, x));
    CHECK(is_centered(f));
  }
}

TEST_CASE("affine_projection agrees with the KKT oracle on random point sets") {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 60; ++k) {
    const std::size_t d = 2 + static_cast<std::size_t>(k % 3);
    const auto pts = random_points(rng, 1 + static_cast<std::size_t>(k % 4), d);
    const auto t = oracle::random_qvec(rng, d);
    const auto x = affine_projection(pts, t);
    // Residual orthogonal to every difference, and x in the affine hull.
    for (const auto& p : pts) CHECK(dot(sub(t, x), sub(p, pts[0])) == 0);
    const auto w = oracle::affine_weights(pts, t);
    if (w) {
      RatVec y = zeros(d);
      for (std::size_t i = 0; i < pts.size(); ++i) axpy((*w)[i], pts[i], y);
      CHECK(x == y);
    }
  }
}

TEST_CASE("linear_projection is the affine projection shifted back") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 30; ++k) {
    const auto pts = random_points(rng, 3, 4);
    const auto dir = oracle::random_qvec(rng, 4);
    const auto lin = linear_projection(pts, dir);
    CHECK(lin == sub(affine_projection(pts, add(pts[0], dir)), pts[0]));
  }
}

TEST_CASE("affine_projection_weights reproduce the origin projection") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 30; ++k) {
    const VPolytope p(random_points(rng, 2 + static_cast<std::size_t>(k % 4), 3));
    const auto f = FaceRef::whole(p);
    const auto w = affine_projection_weights(f);
    REQUIRE(w.size() == f.size());
    Rational total = 0;
    RatVec x = zeros(3);
    for (std::size_t i = 0; i < w.size(); ++i) {
      total += w[i];
      axpy(w[i], p.vertex(f.indices()[i]), x);
    }
    CHECK(total == 1);
    CHECK(x == affine_projection_origin(f));
  }
}

TEST_CASE("contains and relint_contains on a square") {
  const VPolytope sq({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  const auto f = FaceRef::whole(sq);
  CHECK(contains(f, {make_rational(1, 2), 0}));
  CHECK_FALSE(relint_contains(f, {make_rational(1, 2), 0}));
  CHECK(relint_contains(f, {make_rational(1, 3), make_rational(2, 3)}));
  CHECK_FALSE(contains(f, {2, 0}));
  // A single vertex is its own relative interior.
  CHECK(relint_contains(FaceRef(sq, {1}), {1, 0}));
}

TEST_CASE("minimal_face on the square") {
  const VPolytope sq({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  CHECK(minimal_face(sq, {make_rational(1, 2), 0}).indices() == std::vector<std::size_t>{0, 1});
  CHECK(minimal_face(sq, {1, 1}).indices() == std::vector<std::size_t>{3});
  CHECK(minimal_face(sq, {make_rational(1, 2), make_rational(1, 4)}).size() == 4);
  CHECK_THROWS_AS(minimal_face(sq, {3, 3}), NotInPolytope);
}

TEST_CASE("property: minimal_face contains x in its relative interior") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 30; ++k) {
    const VPolytope p(random_points(rng, 5, 3));
    // A random convex combination with some weights forced to zero.
    RatVec x = zeros(3);
    std::vector<long> w(p.size());
    long total = 0;
    for (std::size_t i = 0; i < p.size(); ++i) total += (w[i] = static_cast<long>(rng() % 3));
    if (total == 0) continue;
    for (std::size_t i = 0; i < p.size(); ++i) axpy(make_rational(w[i], total), p.vertex(i), x);
    const auto f = minimal_face(p, x);
    CHECK(relint_contains(f, x));
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (w[i] > 0) CHECK(std::find(f.indices().begin(), f.indices().end(), i) != f.indices().end());
    }
  }
}

TEST_CASE("variational inequality residual certifies projections") {
  const auto s = unit_simplex(3);
  const RatVec t{1, 0, 0};
  CHECK(variational_inequality_residual(s, t, t).value == 0);
  const auto bad = variational_inequality_residual(s, t, {0, 1, 0});
  CHECK(bad.value > 0);
  CHECK(bad.vertex == 0);
  const std::vector<double> tf{1, 0, 0}, xf{1, 0, 0};
  CHECK(variational_inequality_residual(s, tf, xf).value == doctest::Approx(0.0));
}

TEST_CASE("exact_projection matches the subset oracle") {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 60; ++k) {
    const std::size_t d = 1 + static_cast<std::size_t>(k % 4), m = 1 + static_cast<std::size_t>(k % 7);
    const auto pts = random_points(rng, m, d);
    const auto t = oracle::random_qvec(rng, d);
    CHECK(exact_projection(VPolytope(pts), t) == oracle::project(pts, t));
  }
}

TEST_CASE("Wolfe projection agrees with the analytic simplex projection") {
  std::mt19937_64 rng(15);
  for (int k = 0; k < 40; ++k) {
    const std::size_t d = 1 + static_cast<std::size_t>(k % 6);
    const auto t = oracle::random_qvec(rng, d);
    const auto ref = oracle::simplex_projection(t);
    const auto res = wolfe_projection(unit_simplex(d), to_double(t), 1e-12);
    for (std::size_t i = 0; i < d; ++i) CHECK(res.point[i] == doctest::Approx(ref[i].get_d()).epsilon(1e-9));
    CHECK(res.residual <= 1e-9);
    double total = 0.0;
    for (double w : res.weights) {
      CHECK(w >= -1e-12);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK(std::is_sorted(res.corral.begin(), res.corral.end()));
  }
}

TEST_CASE("min_norm_point on a target inside returns the target") {
  const VPolytope sq({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  const std::vector<double> t{0.25, 0.75};
  const auto x = min_norm_point(sq, t);
  CHECK(x[0] == doctest::Approx(0.25));
  CHECK(x[1] == doctest::Approx(0.75));
}

TEST_CASE("check_monotone on simplices and a non-centred triangle") {
  for (std::size_t d = 1; d <= 5; ++d) {
    const auto s = unit_simplex(d);
    const auto cert = check_monotone(s, simplex_faces(s));
    CHECK(cert.verdict == Verdict::Monotone);
    CHECK(cert.condition_i_holds);
    CHECK(cert.min_norm_point == RatVec(d, make_rational(1, static_cast<long>(d))));
  }
  auto all_faces = [](const VPolytope& p) {
    std::vector<FaceRef> faces;
    for (std::size_t mask = 1; mask < (1u << p.size()); ++mask) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (mask & (1u << i)) idx.push_back(i);
      }
      faces.emplace_back(p, idx);
    }
    return faces;
  };
  // The origin is the barycentre, but the edge from (1,0) to (2,1) has its
  // origin projection (1/2,-1/2) outside the edge.
  const VPolytope tri({{1, 0}, {2, 1}, {-3, -1}});
  const auto faces = all_faces(tri);
  const auto cert = check_monotone(tri, faces);
  CHECK(cert.condition_i_holds);
  CHECK(cert.verdict == Verdict::NotMonotone);
  REQUIRE(cert.witness_face);
  CHECK(cert.witness_face->indices() == std::vector<std::size_t>{0, 1});
  CHECK(*cert.witness_projection == RatVec{make_rational(1, 2), make_rational(-1, 2)});
  const auto serial = check_monotone_serial(tri, faces);
  CHECK(serial.witness_index == cert.witness_index);

  // Origin outside: condition (i) fails and no face witness is needed.
  const VPolytope far({{1, 0}, {2, 1}, {3, -2}});
  const auto c2 = check_monotone(far, all_faces(far));
  CHECK_FALSE(c2.condition_i_holds);
  CHECK(c2.verdict == Verdict::NotMonotone);
  CHECK(c2.min_norm_point == RatVec{1, 0});
}

TEST_CASE("simplex_faces enumerates 2^d - 1 faces") {
  CHECK(simplex_faces(unit_simplex(4)).size() == 15);
}
