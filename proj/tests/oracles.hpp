#pragma once

// Brute-force reference implementations used only by the tests. None of
// these call into the library's linear algebra, LP or projection code.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using Q = mpq_class;
using QVec = std::vector<Q>;

// mpq_class(num, den) does not reduce; every fraction built from integers
// goes through here.
inline Q frac(long num, long den) {
  Q q(num, den);
  q.canonicalize();
  return q;
}

// Solves the square system M x = b by Gauss-Jordan elimination; nullopt if
// M is singular.
inline std::optional<QVec> gauss_solve(std::vector<QVec> m, QVec b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return std::nullopt;
    std::swap(m[piv], m[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Q f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      b[r] -= f * b[col];
    }
  }
  QVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
  return x;
}

inline Q dot(const QVec& a, const QVec& b) {
  Q s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline std::size_t rank(std::vector<QVec> rows) {
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      const Q f = rows[i][c] / rows[r][c];
      for (std::size_t k = c; k < cols; ++k) rows[i][k] -= f * rows[r][k];
    }
    ++r;
  }
  return r;
}

// Number of permutations s with a[i][s(i)] != 0.
inline std::uint64_t permanent(const std::vector<std::vector<int>>& a) {
  const std::size_t n = a.size();
  std::vector<std::size_t> s(n);
  std::iota(s.begin(), s.end(), std::size_t{0});
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = a[i][s[i]] != 0;
    count += ok ? 1 : 0;
  } while (std::next_permutation(s.begin(), s.end()));
  return count;
}

// Barycentric weights lambda (sum 1) of the projection of t onto aff(pts),
// from the KKT system of min |sum lambda_i p_i - t|^2; nullopt if the
// points are affinely dependent.
inline std::optional<QVec> affine_weights(const std::vector<QVec>& pts, const QVec& t) {
  const std::size_t k = pts.size();
  std::vector<QVec> m(k + 1, QVec(k + 1));
  QVec rhs(k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = 2 * dot(pts[i], pts[j]);
    m[i][k] = 1;
    m[k][i] = 1;
    rhs[i] = 2 * dot(pts[i], t);
  }
  rhs[k] = 1;
  auto sol = gauss_solve(m, rhs);
  if (!sol) return std::nullopt;
  sol->resize(k);
  return sol;
}

// Exact projection of t onto conv(vs): tries every affinely independent
// vertex subset and keeps the candidate with nonnegative weights that
// satisfies <t - x, v - x> <= 0 for all vertices.
inline QVec project(const std::vector<QVec>& vs, const QVec& t) {
  const std::size_t m = vs.size();
  const std::size_t d = t.size();
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    std::vector<QVec> pts;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) pts.push_back(vs[i]);
    }
    const auto w = affine_weights(pts, t);
    if (!w) continue;
    if (std::any_of(w->begin(), w->end(), [](const Q& q) { return q < 0; })) continue;
    QVec x(d, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = 0; j < d; ++j) x[j] += (*w)[i] * pts[i][j];
    }
    QVec n(d);
    for (std::size_t j = 0; j < d; ++j) n[j] = t[j] - x[j];
    bool ok = true;
    for (const auto& v : vs) {
      QVec diff(d);
      for (std::size_t j = 0; j < d; ++j) diff[j] = v[j] - x[j];
      if (dot(n, diff) > 0) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
  return {};
}

// min cost^T z s.t. A z = b, z >= 0 by enumerating basic solutions.
// Returns the optimal objective, or nullopt if infeasible. Assumes bounded.
inline std::optional<Q> lp_min_basic(const std::vector<QVec>& a, const QVec& b, const QVec& cost) {
  const std::size_t rows = a.size();
  const std::size_t cols = cost.size();
  std::optional<Q> best;
  // z = 0 is the only basic solution when b = 0 and the system has no rows of use.
  for (std::uint32_t mask = 0; mask < (1u << cols); ++mask) {
    std::vector<std::size_t> basis;
    for (std::size_t j = 0; j < cols; ++j) {
      if (mask & (1u << j)) basis.push_back(j);
    }
    // Least-squares style: solve the normal equations of A_B z_B = b and check exactness.
    const std::size_t k = basis.size();
    std::vector<QVec> m(k, QVec(k));
    QVec rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        Q s = 0;
        for (std::size_t r = 0; r < rows; ++r) s += a[r][basis[i]] * a[r][basis[j]];
        m[i][j] = s;
      }
      Q s = 0;
      for (std::size_t r = 0; r < rows; ++r) s += a[r][basis[i]] * b[r];
      rhs[i] = s;
    }
    QVec zb;
    if (k > 0) {
      auto sol = gauss_solve(m, rhs);
      if (!sol) continue;
      zb = *sol;
    }
    if (std::any_of(zb.begin(), zb.end(), [](const Q& q) { return q < 0; })) continue;
    bool exact = true;
    for (std::size_t r = 0; r < rows && exact; ++r) {
      Q s = 0;
      for (std::size_t i = 0; i < k; ++i) s += a[r][basis[i]] * zb[i];
      exact = s == b[r];
    }
    if (!exact) continue;
    Q obj = 0;
    for (std::size_t i = 0; i < k; ++i) obj += cost[basis[i]] * zb[i];
    if (!best || obj < *best) best = obj;
  }
  return best;
}

// Projection of y onto the probability simplex by trying every support set
// and checking the KKT conditions directly.
inline QVec simplex_projection(const QVec& y) {
  const std::size_t d = y.size();
  for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
    Q sum = 0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (mask & (1u << i)) {
        sum += y[i];
        ++k;
      }
    }
    const Q tau = (sum - 1) / Q(static_cast<long>(k));
    bool ok = true;
    QVec x(d, 0);
    for (std::size_t i = 0; i < d && ok; ++i) {
      if (mask & (1u << i)) {
        x[i] = y[i] - tau;
        ok = x[i] > 0;
      } else {
        ok = y[i] <= tau;
      }
    }
    if (ok) return x;
  }
  return {};
}

inline Q random_q(std::mt19937_64& rng, long lo, long hi, long max_den) {
  std::uniform_int_distribution<long> num(lo * max_den, hi * max_den), den(1, max_den);
  Q q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline QVec random_qvec(std::mt19937_64& rng, std::size_t d, long lo = -3, long hi = 3, long max_den = 4) {
  QVec v(d);
  for (auto& q : v) q = random_q(rng, lo, hi, max_den);
  return v;
}

// Exact decimal literal ("-0.575") as a rational, parsed digit by digit.
inline Q decimal(const char* text) {
  Q value = 0;
  Q scale = 1;
  bool neg = false, frac = false;
  for (const char* c = text; *c; ++c) {
    if (*c == '-') {
      neg = true;
    } else if (*c == '.') {
      frac = true;
    } else {
      value = value * 10 + (*c - '0');
      if (frac) scale *= 10;
    }
  }
  value /= scale;
  return neg ? Q(-value) : value;
}

// Every permutation of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(s);
  while (std::next_permutation(s.begin(), s.end()));
  return out;
}

inline QVec perm_matrix(const std::vector<int>& p, const Q& value = 1) {
  const std::size_t n = p.size();
  QVec v(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + static_cast<std::size_t>(p[i])] = value;
  return v;
}

struct Face {
  std::uint64_t support = 0;
  std::vector<std::vector<int>> perms;
};

// Faces of the Birkhoff polytope: 0/1 masks equal to the union of the
// permutations they dominate.
inline std::vector<Face> birkhoff_faces(int n) {
  const auto perms = permutations(n);
  std::vector<std::uint64_t> pmask;
  for (const auto& p : perms) {
    std::uint64_t m = 0;
    for (int i = 0; i < n; ++i) m |= std::uint64_t{1} << (i * n + p[static_cast<std::size_t>(i)]);
    pmask.push_back(m);
  }
  std::vector<Face> out;
  const std::uint64_t total = std::uint64_t{1} << (n * n);
  for (std::uint64_t a = 1; a < total; ++a) {
    std::uint64_t cover = 0;
    Face f{a, {}};
    for (std::size_t k = 0; k < perms.size(); ++k) {
      if ((pmask[k] & ~a) == 0) {
        cover |= pmask[k];
        f.perms.push_back(perms[k]);
      }
    }
    if (!f.perms.empty() && cover == a) out.push_back(std::move(f));
  }
  return out;
}

// Closest point to the origin in aff(pts), via a greedily chosen affinely
// independent subset.
inline QVec origin_projection(const std::vector<QVec>& pts) {
  std::vector<QVec> basis{pts[0]};
  std::vector<QVec> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    QVec diff(pts[i].size());
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = pts[i][j] - pts[0][j];
    diffs.push_back(diff);
    if (rank(diffs) == diffs.size()) {
      basis.push_back(pts[i]);
    } else {
      diffs.pop_back();
    }
  }
  const auto w = affine_weights(basis, QVec(pts[0].size(), 0));
  QVec x(pts[0].size(), 0);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += (*w)[i] * basis[i][j];
  }
  return x;
}

// True iff some row and column permutation maps mask a onto mask b.
inline bool same_orbit(std::uint64_t a, std::uint64_t b, int n) {
  const auto perms = permutations(n);
  for (const auto& r : perms) {
    for (const auto& c : perms) {
      std::uint64_t m = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if ((a >> (i * n + j)) & 1u) m |= std::uint64_t{1} << (r[static_cast<std::size_t>(i)] * n + c[static_cast<std::size_t>(j)]);
        }
      }
      if (m == b) return true;
    }
  }
  return false;
}

inline Q maxtr(const QVec& a, int n) {
  std::optional<Q> best;
  for (const auto& p : permutations(n)) {
    Q s = 0;
    for (int i = 0; i < n; ++i) s += a[static_cast<std::size_t>(i * n + p[static_cast<std::size_t>(i)])];
    if (!best || s > *best) best = s;
  }
  return *best;
}

}  // namespace oracle
