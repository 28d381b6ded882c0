#include "quadreg/birkhoff.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

#include "quadreg/errors.hpp"

namespace quadreg {

PermMatrix::PermMatrix(std::vector<std::uint8_t> perm) : perm_(std::move(perm)) {
  std::vector<bool> seen(perm_.size(), false);
  for (auto v : perm_) {
    if (v >= perm_.size() || seen[v]) throw std::invalid_argument("not a permutation");
    seen[v] = true;
  }
}

PermMatrix PermMatrix::identity(std::size_t n) {
  std::vector<std::uint8_t> p(n);
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  return PermMatrix(std::move(p));
}

RatVec PermMatrix::flatten(const Rational& value) const {
  const std::size_t n = perm_.size();
  RatVec out = zeros(n * n);
  for (std::size_t i = 0; i < n; ++i) out[i * n + perm_[i]] = value;
  return out;
}

std::size_t perm_rank(const PermMatrix& p) {
  const std::size_t n = p.n();
  std::size_t rank = 0;
  std::uint32_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t smaller_unused =
        static_cast<std::size_t>(std::popcount(~used & ((1u << p[i]) - 1u)));
    std::size_t fact = 1;
    for (std::size_t k = 2; k < n - i; ++k) fact *= k;
    rank += smaller_unused * fact;
    used |= 1u << p[i];
  }
  return rank;
}

std::vector<PermMatrix> all_permutations(std::size_t n) {
  std::vector<std::uint8_t> p(n);
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  std::vector<PermMatrix> out;
  do {
    out.emplace_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

SupportMatrix::SupportMatrix(std::size_t n, std::uint64_t bits) : n_(n), bits_(bits) {
  if (n > kMaxSupportN) throw SizeLimit("support matrices are limited to N <= 8");
  if (n < kMaxSupportN && (bits >> (n * n)) != 0) throw std::invalid_argument("support bits out of range");
}

SupportMatrix SupportMatrix::of(const PermMatrix& p) {
  SupportMatrix s(p.n(), 0);
  for (std::size_t i = 0; i < p.n(); ++i) s.set(i, p[i]);
  return s;
}

SupportMatrix SupportMatrix::all_ones(std::size_t n) {
  return {n, n == kMaxSupportN ? ~std::uint64_t{0} : (std::uint64_t{1} << (n * n)) - 1};
}

SupportMatrix SupportMatrix::from_rows(const std::vector<std::string>& rows) {
  const std::size_t n = rows.size();
  if (n == 0 || n > kMaxSupportN) throw ParseError("support matrix must have 1..8 rows");
  SupportMatrix s(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw ParseError("support matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i][j] == '1') s.set(i, j);
      else if (rows[i][j] != '0') throw ParseError("support matrix rows must contain only 0/1");
    }
  }
  return s;
}

void SupportMatrix::set(std::size_t i, std::size_t j, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (i * n_ + j);
  bits_ = value ? (bits_ | bit) : (bits_ & ~bit);
}

std::size_t SupportMatrix::count() const { return static_cast<std::size_t>(std::popcount(bits_)); }

bool SupportMatrix::covers(const PermMatrix& p) const {
  for (std::size_t i = 0; i < p.n(); ++i) {
    if (!test(i, p[i])) return false;
  }
  return true;
}

std::vector<std::string> SupportMatrix::rows() const {
  std::vector<std::string> out(n_, std::string(n_, '0'));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (test(i, j)) out[i][j] = '1';
    }
  }
  return out;
}

namespace {

std::uint64_t permanent_rec(const SupportMatrix& a, std::size_t row, std::uint32_t used) {
  const std::size_t n = a.n();
  if (row == n) return 1;
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(used & (1u << j)) && a.test(row, j)) total += permanent_rec(a, row + 1, used | (1u << j));
  }
  return total;
}

void collect_rec(const SupportMatrix& a, std::size_t row, std::uint32_t used,
                 std::vector<std::uint8_t>& cur, std::vector<PermMatrix>& out) {
  const std::size_t n = a.n();
  if (row == n) {
    out.emplace_back(cur);
    return;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(used & (1u << j)) && a.test(row, j)) {
      cur[row] = static_cast<std::uint8_t>(j);
      collect_rec(a, row + 1, used | (1u << j), cur, out);
    }
  }
}

// Union of the supports of all permutations below `a`, and their count.
struct Cover {
  std::uint64_t bits = 0;
  std::uint64_t count = 0;
};

void cover_rec(const SupportMatrix& a, std::size_t row, std::uint32_t used, std::uint64_t path, Cover& out) {
  const std::size_t n = a.n();
  if (row == n) {
    out.bits |= path;
    ++out.count;
    return;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!(used & (1u << j)) && a.test(row, j))
      cover_rec(a, row + 1, used | (1u << j), path | (std::uint64_t{1} << (row * n + j)), out);
  }
}

bool has_empty_line(std::size_t n, std::uint64_t bits) {
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t row_mask = ((std::uint64_t{1} << n) - 1) << (i * n);
    if ((bits & row_mask) == 0) return true;
    std::uint64_t col_mask = 0;
    for (std::size_t r = 0; r < n; ++r) col_mask |= std::uint64_t{1} << (r * n + i);
    if ((bits & col_mask) == 0) return true;
  }
  return false;
}

void sort_faces(std::vector<BirkhoffFace>& faces) {
  std::sort(faces.begin(), faces.end(), [](const BirkhoffFace& a, const BirkhoffFace& b) {
    if (a.perms.size() != b.perms.size()) return a.perms.size() < b.perms.size();
    return a.support.bits() < b.support.bits();
  });
}

void check_enumeration_size(std::size_t n) {
  if (n == 0) throw std::invalid_argument("N must be positive");
  if (n >= 5) throw SizeLimit("face enumeration is limited to N <= 4 (2^(N^2) candidate supports)");
}

}  // namespace

std::uint64_t permanent(const SupportMatrix& a) { return permanent_rec(a, 0, 0); }

std::vector<PermMatrix> permutations_below(const SupportMatrix& a) {
  std::vector<PermMatrix> out;
  std::vector<std::uint8_t> cur(a.n());
  collect_rec(a, 0, 0, cur, out);
  return out;  // row-major DFS with ascending columns is lexicographic
}

bool is_face_support(const SupportMatrix& a) {
  Cover c;
  cover_rec(a, 0, 0, 0, c);
  return c.count >= 1 && c.bits == a.bits();
}

BirkhoffFace face_from_support(const SupportMatrix& a) {
  if (!is_face_support(a)) throw std::invalid_argument("not a Birkhoff face support");
  return BirkhoffFace{a.n(), permutations_below(a), a};
}

std::vector<BirkhoffFace> enumerate_faces_serial(std::size_t n) {
  check_enumeration_size(n);
  std::vector<BirkhoffFace> faces;
  const std::uint64_t total = std::uint64_t{1} << (n * n);
  for (std::uint64_t bits = 1; bits < total; ++bits) {
    if (has_empty_line(n, bits)) continue;
    const SupportMatrix a(n, bits);
    if (is_face_support(a)) faces.push_back(face_from_support(a));
  }
  sort_faces(faces);
  return faces;
}

std::vector<BirkhoffFace> enumerate_faces(std::size_t n) {
  check_enumeration_size(n);
  const auto total = static_cast<std::int64_t>(std::uint64_t{1} << (n * n));
  std::vector<BirkhoffFace> faces;
#pragma omp parallel
  {
    std::vector<BirkhoffFace> local;
#pragma omp for schedule(static) nowait
    for (std::int64_t b = 1; b < total; ++b) {
      const auto bits = static_cast<std::uint64_t>(b);
      if (has_empty_line(n, bits)) continue;
      const SupportMatrix a(n, bits);
      if (is_face_support(a)) local.push_back(face_from_support(a));
    }
#pragma omp critical(quadreg_enumerate_faces)
    faces.insert(faces.end(), std::make_move_iterator(local.begin()), std::make_move_iterator(local.end()));
  }
  sort_faces(faces);
  return faces;
}

BirkhoffFace special_face(std::size_t n) {
  if (n == 0) throw std::invalid_argument("N must be positive");
  if (n > kMaxSupportN) throw SizeLimit("special_face is limited to N <= 8");
  std::vector<PermMatrix> perms;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::uint8_t> p(n);
    std::iota(p.begin(), p.end(), std::uint8_t{0});
    std::swap(p[0], p[k]);
    perms.emplace_back(std::move(p));
  }
  std::sort(perms.begin(), perms.end());
  SupportMatrix support(n, 0);
  for (const auto& p : perms) support = support | SupportMatrix::of(p);
  return BirkhoffFace{n, std::move(perms), support};
}

namespace {

BirkhoffFace minimal_face_with_mass(const RatMat& pi, const Rational& mass) {
  const std::size_t n = pi.rows();
  if (n == 0 || pi.cols() != n) throw NotDoublyStochastic("matrix must be square and nonempty");
  if (n > kMaxSupportN) throw SizeLimit("minimal_face_of is limited to N <= 8");
  SupportMatrix support(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Rational row = 0, col = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(pi(i, j)) < 0) throw NotDoublyStochastic("negative entry");
      if (sgn(pi(i, j)) > 0) support.set(i, j);
      row += pi(i, j);
      col += pi(j, i);
    }
    if (row != mass || col != mass) throw NotDoublyStochastic("row or column sum differs from " + to_string(mass));
  }
  return face_from_support(support);
}

}  // namespace

BirkhoffFace minimal_face_of(const RatMat& pi) { return minimal_face_with_mass(pi, Rational(1)); }

BirkhoffFace minimal_face_of_coupling(const RatMat& gamma) {
  return minimal_face_with_mass(gamma, make_rational(1, static_cast<long>(gamma.rows())));
}

namespace {

VPolytope permutation_polytope(std::size_t n, const Rational& value) {
  if (n == 0) throw std::invalid_argument("N must be positive");
  if (n > 6) throw SizeLimit("Birkhoff vertex enumeration is limited to N <= 6");
  std::vector<RatVec> vs;
  for (const auto& p : all_permutations(n)) vs.push_back(p.flatten(value));
  return VPolytope(std::move(vs));
}

}  // namespace

VPolytope birkhoff_polytope(std::size_t n) { return permutation_polytope(n, Rational(1)); }

VPolytope transport_polytope(std::size_t n) {
  return permutation_polytope(n, make_rational(1, static_cast<long>(n)));
}

FaceRef to_face_ref(const BirkhoffFace& face, const VPolytope& polytope) {
  if (polytope.dim() != face.n * face.n) throw std::invalid_argument("polytope size does not match face");
  std::vector<std::size_t> idx;
  idx.reserve(face.perms.size());
  for (const auto& p : face.perms) idx.push_back(perm_rank(p));
  return FaceRef(polytope, std::move(idx));
}

SupportMatrix canonical_form(const SupportMatrix& support) {
  const std::size_t n = support.n();
  if (n > 5) throw SizeLimit("canonical_form is limited to N <= 5");
  const auto perms = all_permutations(n);
  std::uint64_t best = support.bits();
  for (const auto& rp : perms) {
    // Row-permuted copy as per-row column masks.
    std::vector<std::uint32_t> rows(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (support.test(i, j)) rows[rp[i]] |= 1u << j;
      }
    }
    for (const auto& cp : perms) {
      std::uint64_t bits = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (rows[i] & (1u << j)) bits |= std::uint64_t{1} << (i * n + cp[j]);
        }
      }
      best = std::min(best, bits);
    }
  }
  return {n, best};
}

SupportMatrix canonical_form(const BirkhoffFace& face) { return canonical_form(face.support); }

}  // namespace quadreg
