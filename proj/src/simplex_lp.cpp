// Dense two-phase tableau simplex over GMP rationals. Bland's rule (lowest
// eligible index enters, lowest basic index breaks ratio ties) guarantees
// termination on degenerate problems, which are the norm here: vertex sets of
// Birkhoff faces give heavily redundant equality systems.

#include <limits>
#include <utility>

#include "quadreg/errors.hpp"
#include "quadreg/exactlin.hpp"

namespace quadreg {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class Tableau {
 public:
  Tableau(const RatMat& A, const RatVec& b)
      : m_(A.rows()), n_(A.cols()), width_(A.cols() + A.rows() + 1),
        rows_(A.rows(), RatVec(width_)), obj_(width_), basis_(A.rows()) {
    for (std::size_t i = 0; i < m_; ++i) {
      const bool flip = sgn(b[i]) < 0;
      for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = flip ? Rational(-A(i, j)) : A(i, j);
      rows_[i][n_ + i] = 1;
      rows_[i][width_ - 1] = flip ? Rational(-b[i]) : b[i];
      basis_[i] = n_ + i;
    }
  }

  // Phase I: minimise the sum of artificials. Returns false if infeasible.
  bool phase_one() {
    for (std::size_t j = 0; j < width_; ++j) obj_[j] = 0;
    for (const auto& row : rows_) {
      for (std::size_t j = 0; j < n_; ++j) obj_[j] -= row[j];
      obj_[width_ - 1] -= row[width_ - 1];
    }
    run(n_ + m_);
    if (sgn(obj_[width_ - 1]) != 0) return false;
    drive_out_artificials();
    return true;
  }

  // Phase II on the original columns. Returns false if unbounded.
  bool phase_two(const RatVec& cost) {
    for (std::size_t j = 0; j < width_; ++j) obj_[j] = 0;
    for (std::size_t j = 0; j < n_; ++j) obj_[j] = cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational& cb = cost[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) {
        if (sgn(rows_[i][j]) != 0) obj_[j] -= cb * rows_[i][j];
      }
    }
    return run(n_);
  }

  RatVec solution() const {
    RatVec z = zeros(n_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < n_) z[basis_[i]] = rows_[i][width_ - 1];
    }
    return z;
  }

 private:
  // Iterates Bland pivots over columns [0, allowed). Returns false if unbounded.
  bool run(std::size_t allowed) {
    for (;;) {
      std::size_t enter = kNone;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (sgn(obj_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == kNone) return true;

      std::size_t leave = kNone;
      Rational best;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Rational& a = rows_[i][enter];
        if (sgn(a) <= 0) continue;
        Rational ratio = rows_[i][width_ - 1] / a;
        if (leave == kNone || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = std::move(ratio);
        }
      }
      if (leave == kNone) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    RatVec& pr = rows_[r];
    const Rational inv = 1 / pr[c];
    for (auto& v : pr) {
      if (sgn(v) != 0) v *= inv;
    }
    auto eliminate = [&](RatVec& row) {
      if (sgn(row[c]) == 0) return;
      const Rational f = row[c];
      for (std::size_t j = 0; j < width_; ++j) {
        if (sgn(pr[j]) != 0) row[j] -= f * pr[j];
      }
    };
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    eliminate(obj_);
    basis_[r] = c;
  }

  // After a feasible phase I, artificials still basic sit at level zero.
  // Pivot them out on any original column, or drop the row as redundant.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      std::size_t col = kNone;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sgn(rows_[i][j]) != 0) {
          col = j;
          break;
        }
      }
      if (col != kNone) {
        pivot(i, col);
        ++i;
      } else {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<RatVec> rows_;
  RatVec obj_;
  std::vector<std::size_t> basis_;
};

// Rows: the coordinates of sum lambda_i v_i, then sum lambda_i.
RatMat convex_system(const std::vector<RatVec>& vertices, std::size_t dim, std::size_t extra_cols) {
  RatMat A(dim + 1, vertices.size() + extra_cols);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    for (std::size_t r = 0; r < dim; ++r) A(r, k) = vertices[k][r];
    A(dim, k) = 1;
  }
  return A;
}

RatVec convex_rhs(const RatVec& x) {
  RatVec b = x;
  b.emplace_back(1);
  return b;
}

void check_dims(const std::vector<RatVec>& vertices, const RatVec& x) {
  for (const auto& v : vertices) {
    if (v.size() != x.size()) throw std::invalid_argument("vertex dimension mismatch");
  }
}

}  // namespace

LpSolution simplex_minimize(const RatMat& A, const RatVec& b, const RatVec& cost) {
  if (b.size() != A.rows() || cost.size() != A.cols()) throw std::invalid_argument("LP shape mismatch");
  Tableau tab(A, b);
  LpSolution out;
  if (!tab.phase_one()) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  if (!tab.phase_two(cost)) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.z = tab.solution();
  out.objective = dot(cost, out.z);
  return out;
}

std::optional<RatVec> lp_convex_weights(const std::vector<RatVec>& vertices, const RatVec& x) {
  check_dims(vertices, x);
  if (vertices.empty()) return std::nullopt;
  const RatMat A = convex_system(vertices, x.size(), 0);
  const auto sol = simplex_minimize(A, convex_rhs(x), zeros(vertices.size()));
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  return sol.z;
}

std::optional<MaxMinWeight> lp_max_min_weight(const std::vector<RatVec>& vertices, const RatVec& x) {
  check_dims(vertices, x);
  if (vertices.empty()) return std::nullopt;
  // Substitute lambda_i = mu_i + t with mu, t >= 0. Restricting t >= 0 loses
  // nothing: any feasible x admits t = min lambda_i >= 0.
  const std::size_t m = vertices.size();
  const std::size_t dim = x.size();
  RatMat A = convex_system(vertices, dim, 1);
  for (std::size_t r = 0; r < dim; ++r) {
    Rational s = 0;
    for (const auto& v : vertices) s += v[r];
    A(r, m) = s;
  }
  A(dim, m) = static_cast<long>(m);
  RatVec cost = zeros(m + 1);
  cost[m] = -1;
  const auto sol = simplex_minimize(A, convex_rhs(x), cost);
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  MaxMinWeight out;
  out.t = sol.z[m];
  out.weights.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.weights[i] = sol.z[i] + out.t;
  return out;
}

std::optional<RatVec> lp_maximize_weight(const std::vector<RatVec>& vertices, const RatVec& x,
                                         std::size_t k) {
  check_dims(vertices, x);
  if (k >= vertices.size()) throw std::out_of_range("vertex index out of range");
  const RatMat A = convex_system(vertices, x.size(), 0);
  RatVec cost = zeros(vertices.size());
  cost[k] = -1;
  const auto sol = simplex_minimize(A, convex_rhs(x), cost);
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  return sol.z;
}

}  // namespace quadreg
