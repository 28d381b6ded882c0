#include <doctest.h>

#include <random>
#include <set>

#include "../oracles.hpp"
#include "quadreg/erdos.hpp"
#include "quadreg/errors.hpp"

using namespace quadreg;

TEST_CASE("maxtr of the identity and a mixed matrix") {
  CHECK(maxtr(RatMat::identity(4)) == 4);
  RatMat a(2, 2);
  a(0, 1) = 3;
  a(1, 0) = 1;
  a(0, 0) = 2;
  CHECK(maxtr(a) == 4);
}

TEST_CASE("property: maxtr matches the oracle on random rational matrices") {
  std::mt19937_64 rng(40);
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 5;
    const auto v = oracle::random_qvec(rng, static_cast<std::size_t>(n * n));
    CHECK(maxtr(RatMat::from_flat(v, static_cast<std::size_t>(n), static_cast<std::size_t>(n))) == oracle::maxtr(v, n));
  }
}

TEST_CASE("doubly stochastic checks and the Markus-Minc gap") {
  CHECK(is_doubly_stochastic(RatMat::identity(3)));
  RatMat u = RatMat::from_flat(RatVec(9, make_rational(1, 3)), 3, 3);
  CHECK(is_doubly_stochastic(u));
  CHECK(markus_minc_gap(u) == 0);
  CHECK(is_erdos(u));
  CHECK(is_erdos(RatMat::identity(3)));
  RatMat bad = RatMat::identity(2);
  bad(0, 1) = 1;
  CHECK_FALSE(is_doubly_stochastic(bad));
  CHECK_THROWS_AS(markus_minc_gap(bad), NotDoublyStochastic);
  CHECK_FALSE(is_erdos(bad));
  // (I + P) / 2 for a 3-cycle P.
  RatMat half(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    half(i, i) = make_rational(1, 2);
    half(i, (i + 1) % 3) = make_rational(1, 2);
  }
  CHECK(markus_minc_gap(half) == maxtr(half) - norm_sq(half.flat()));
}

TEST_CASE("property: Markus-Minc gap is nonnegative on random Birkhoff combinations") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + k % 3;
    const auto perms = oracle::permutations(n);
    oracle::QVec a(static_cast<std::size_t>(n * n), 0);
    long total = 0;
    std::vector<std::pair<std::size_t, long>> terms;
    for (int t = 0; t < 3; ++t) {
      const long w = 1 + static_cast<long>(rng() % 5);
      terms.emplace_back(rng() % perms.size(), w);
      total += w;
    }
    for (const auto& [idx, w] : terms) {
      const auto m = oracle::perm_matrix(perms[idx], oracle::frac(w, total));
      for (std::size_t j = 0; j < a.size(); ++j) a[j] += m[j];
    }
    CHECK(markus_minc_gap(RatMat::from_flat(a, static_cast<std::size_t>(n), static_cast<std::size_t>(n))) >= 0);
  }
}

TEST_CASE("enumerate_erdos counts and contents") {
  CHECK(enumerate_erdos(1).size() == 1);
  CHECK(enumerate_erdos(2).size() == 3);
  const auto e3 = enumerate_erdos(3);
  CHECK(e3.size() == 49);
  for (const auto& r : e3) {
    CHECK(r.norm_sq == r.maxtr_value);
    CHECK(is_erdos(r.matrix));
    CHECK(r.face_support.n() == 3);
  }
  for (std::size_t k = 1; k < e3.size(); ++k) CHECK(e3[k - 1].matrix.flat() < e3[k].matrix.flat());
}

TEST_CASE("erdos_from_face rejects a non-centred face") {
  CHECK_FALSE(erdos_from_face(special_face(5)));
  const auto rec = erdos_from_face(face_from_support(SupportMatrix::all_ones(3)));
  REQUIRE(rec);
  CHECK(rec->matrix.flat() == RatVec(9, make_rational(1, 3)));
}
