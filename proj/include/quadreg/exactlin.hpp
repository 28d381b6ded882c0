#pragma once

// Exact rational linear algebra. Everything here runs on GMP rationals;
// there is deliberately no floating-point path in this header.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quadreg {

// GMP keeps mpq results canonical (lowest terms, positive denominator)
// after every arithmetic operation.
using Rational = mpq_class;
using RatVec = std::vector<Rational>;

Rational make_rational(long num, long den = 1);

// Accepts integers ("3"), fractions ("-11/10") and decimals ("-1.1",
// "2.5e-1"). Decimals are converted exactly, never through a binary float.
// A leading U+2212 minus sign is accepted as well. Throws ParseError.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
double to_double(const Rational& q);
std::vector<double> to_double(const RatVec& v);

RatVec zeros(std::size_t n);
Rational dot(const RatVec& a, const RatVec& b);
Rational norm_sq(const RatVec& a);
RatVec add(const RatVec& a, const RatVec& b);
RatVec sub(const RatVec& a, const RatVec& b);
RatVec scale(const RatVec& a, const Rational& s);
// y += s * x
void axpy(const Rational& s, const RatVec& x, RatVec& y);
bool is_zero(const RatVec& v);

// Dense row-major rational matrix.
class RatMat {
 public:
  RatMat() = default;
  RatMat(std::size_t rows, std::size_t cols);

  static RatMat identity(std::size_t n);
  static RatMat from_columns(const std::vector<RatVec>& columns, std::size_t rows);
  // Interprets `flat` as a row-major rows x cols grid.
  static RatMat from_flat(const RatVec& flat, std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RatVec column(std::size_t c) const;
  RatVec row(std::size_t r) const;
  const RatVec& flat() const { return data_; }

  RatVec multiply(const RatVec& x) const;            // M x
  RatVec multiply_transposed(const RatVec& y) const;  // M^T y

  friend bool operator==(const RatMat& a, const RatMat& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  RatVec data_;
};

// Coefficients beta of the orthogonal projection of y onto span(columns of X):
// X^T X beta = X^T y. Throws SingularSystem when the columns are dependent.
RatVec solve_normal_equations(const RatMat& X, const RatVec& y);

// Solves the square system A x = b by exact Gaussian elimination.
// Throws SingularSystem.
RatVec solve_square(RatMat A, RatVec b);

// Greedy left-to-right basis: column j is kept iff it is independent of the
// columns kept before it.
std::vector<std::size_t> independent_columns(const RatMat& M);
std::vector<std::size_t> independent_columns(const std::vector<RatVec>& columns);

std::size_t rank(const RatMat& M);

// ---------------------------------------------------------------------------
// Exact linear programming (dense tableau simplex, Bland's rule).

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  RatVec z;            // primal solution, valid when Optimal
  Rational objective;  // c^T z, valid when Optimal
};

// minimize cost^T z  subject to  A z = b, z >= 0.
LpSolution simplex_minimize(const RatMat& A, const RatVec& b, const RatVec& cost);

// Convex weights lambda >= 0, sum lambda = 1, sum lambda_i v_i = x, or
// nullopt when x is outside conv(vertices).
std::optional<RatVec> lp_convex_weights(const std::vector<RatVec>& vertices, const RatVec& x);

struct MaxMinWeight {
  Rational t;
  RatVec weights;
};

// max t  s.t.  x = sum lambda_i v_i, sum lambda_i = 1, lambda_i >= t.
// x lies in the relative interior of conv(vertices) iff t > 0.
// Returns nullopt when x is outside conv(vertices).
std::optional<MaxMinWeight> lp_max_min_weight(const std::vector<RatVec>& vertices,
                                              const RatVec& x);

// A convex representation of x that maximizes lambda_k; nullopt if x is
// outside conv(vertices).
std::optional<RatVec> lp_maximize_weight(const std::vector<RatVec>& vertices, const RatVec& x,
                                         std::size_t k);

}  // namespace quadreg
