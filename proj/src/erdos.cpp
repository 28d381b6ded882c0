#include "quadreg/erdos.hpp"

#include <algorithm>

#include "quadreg/errors.hpp"
#include "quadreg/polytope.hpp"

namespace quadreg {

Rational maxtr(const RatMat& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) throw std::invalid_argument("maxtr needs a square nonempty matrix");
  if (n > kMaxSupportN) throw SizeLimit("maxtr is limited to N <= 8");
  std::vector<std::size_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  Rational best;
  bool first = true;
  do {
    Rational t = 0;
    for (std::size_t i = 0; i < n; ++i) t += a(i, s[i]);
    if (first || t > best) best = t;
    first = false;
  } while (std::next_permutation(s.begin(), s.end()));
  return best;
}

bool is_doubly_stochastic(const RatMat& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    Rational row = 0, col = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(a(i, j)) < 0) return false;
      row += a(i, j);
      col += a(j, i);
    }
    if (row != 1 || col != 1) return false;
  }
  return true;
}

Rational markus_minc_gap(const RatMat& a) {
  if (!is_doubly_stochastic(a)) throw NotDoublyStochastic("markus_minc_gap needs a doubly stochastic matrix");
  return maxtr(a) - norm_sq(a.flat());
}

bool is_erdos(const RatMat& a) {
  if (a.rows() > kMaxSupportN) return false;
  return is_doubly_stochastic(a) && sgn(markus_minc_gap(a)) == 0;
}

namespace {

std::optional<ErdosRecord> record_for(const BirkhoffFace& face, const VPolytope& pi_n) {
  RatMat a = RatMat::from_flat(affine_projection_origin(to_face_ref(face, pi_n)), face.n, face.n);
  if (!is_erdos(a)) return std::nullopt;
  ErdosRecord r;
  r.maxtr_value = maxtr(a);
  r.norm_sq = norm_sq(a.flat());
  r.face_support = face.support;
  r.matrix = std::move(a);
  return r;
}

void sort_unique(std::vector<ErdosRecord>& records) {
  auto less = [](const ErdosRecord& a, const ErdosRecord& b) {
    return std::lexicographical_compare(a.matrix.flat().begin(), a.matrix.flat().end(), b.matrix.flat().begin(),
                                        b.matrix.flat().end());
  };
  std::stable_sort(records.begin(), records.end(), less);
  records.erase(std::unique(records.begin(), records.end(),
                            [](const ErdosRecord& a, const ErdosRecord& b) { return a.matrix == b.matrix; }),
                records.end());
  // An Erdos matrix is the projection of its own minimal face; report that support.
  for (auto& r : records) {
    SupportMatrix s(r.matrix.rows(), 0);
    for (std::size_t i = 0; i < r.matrix.rows(); ++i) {
      for (std::size_t j = 0; j < r.matrix.cols(); ++j) {
        if (sgn(r.matrix(i, j)) > 0) s.set(i, j);
      }
    }
    r.face_support = s;
  }
}

}  // namespace

std::optional<ErdosRecord> erdos_from_face(const BirkhoffFace& face) {
  return record_for(face, birkhoff_polytope(face.n));
}

std::vector<ErdosRecord> enumerate_erdos_serial(std::size_t n) {
  const auto faces = enumerate_faces_serial(n);
  const VPolytope pi_n = birkhoff_polytope(n);
  std::vector<ErdosRecord> out;
  for (const auto& f : faces) {
    if (auto r = record_for(f, pi_n)) out.push_back(std::move(*r));
  }
  sort_unique(out);
  return out;
}

std::vector<ErdosRecord> enumerate_erdos(std::size_t n) {
  const auto faces = enumerate_faces(n);
  const VPolytope pi_n = birkhoff_polytope(n);
  std::vector<std::optional<ErdosRecord>> slots(faces.size());
  const auto count = static_cast<std::ptrdiff_t>(faces.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < count; ++k)
    slots[static_cast<std::size_t>(k)] = record_for(faces[static_cast<std::size_t>(k)], pi_n);
  std::vector<ErdosRecord> out;
  for (auto& s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  sort_unique(out);
  return out;
}

}  // namespace quadreg
