#include <doctest.h>

#include "quadreg/birkhoff.hpp"
#include "quadreg/erdos.hpp"
#include "quadreg/parallel.hpp"
#include "quadreg/polytope.hpp"

using namespace quadreg;

TEST_CASE("configure_threads") {
  CHECK(configure_threads(2) == 2);
  CHECK(max_threads() == 2);
  CHECK_THROWS_AS(configure_threads(0), std::invalid_argument);
  configure_threads(1);
}

TEST_CASE("parallel kernels equal their serial references") {
  for (int threads : {1, 3}) {
    configure_threads(threads);
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto a = enumerate_faces(n);
      const auto b = enumerate_faces_serial(n);
      REQUIRE(a.size() == b.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].support == b[k].support);
        CHECK(a[k].perms == b[k].perms);
      }
    }
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto a = enumerate_erdos(n);
      const auto b = enumerate_erdos_serial(n);
      REQUIRE(a.size() == b.size());
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].matrix == b[k].matrix);
    }
    const auto poly = birkhoff_polytope(3);
    std::vector<FaceRef> faces;
    for (const auto& f : enumerate_faces(3)) faces.push_back(to_face_ref(f, poly));
    const auto p = check_monotone(poly, faces);
    const auto s = check_monotone_serial(poly, faces);
    CHECK(p.verdict == s.verdict);
    CHECK(p.min_norm_point == s.min_norm_point);
  }
  configure_threads(1);
}
