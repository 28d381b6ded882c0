#include "quadreg/exactlin.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "quadreg/errors.hpp"

namespace quadreg {

Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
}

// Splits off a leading '+', '-' or U+2212; returns true when negative.
bool take_sign(std::string_view& s) {
  if (s.starts_with("\xE2\x88\x92")) {
    s.remove_prefix(3);
    return true;
  }
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    const bool neg = s.front() == '-';
    s.remove_prefix(1);
    return neg;
  }
  return false;
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  const std::string original(text);
  const bool negative = take_sign(s);
  if (s.empty()) throw ParseError("empty rational literal: '" + original + "'");

  Rational q;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const auto num = trim(s.substr(0, slash));
    const auto den = trim(s.substr(slash + 1));
    if (!all_digits(num) || !all_digits(den)) throw ParseError("malformed fraction: '" + original + "'");
    const mpz_class n{std::string(num), 10}, d{std::string(den), 10};
    if (d == 0) throw ParseError("zero denominator: '" + original + "'");
    q = Rational(n, d);
    q.canonicalize();
  } else {
    std::string_view mantissa = s;
    long exponent = 0;
    if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = s.substr(0, e);
      std::string_view exp_part = s.substr(e + 1);
      const bool exp_neg = take_sign(exp_part);
      if (!all_digits(exp_part) || exp_part.size() > 6) throw ParseError("malformed exponent: '" + original + "'");
      exponent = std::stol(std::string(exp_part));
      if (exp_neg) exponent = -exponent;
    }
    std::string digits;
    long frac_len = 0;
    if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      const auto int_part = mantissa.substr(0, dot);
      const auto frac_part = mantissa.substr(dot + 1);
      if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
          (!frac_part.empty() && !all_digits(frac_part)))
        throw ParseError("malformed decimal: '" + original + "'");
      digits = std::string(int_part) + std::string(frac_part);
      frac_len = static_cast<long>(frac_part.size());
    } else {
      if (!all_digits(mantissa)) throw ParseError("malformed number: '" + original + "'");
      digits = std::string(mantissa);
    }
    const long shift = exponent - frac_len;
    mpz_class n(digits, 10);
    if (shift >= 0) {
      q = Rational(n * pow10(static_cast<unsigned long>(shift)));
    } else {
      q = Rational(n, pow10(static_cast<unsigned long>(-shift)));
      q.canonicalize();
    }
  }
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

std::vector<double> to_double(const RatVec& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](const Rational& q) { return q.get_d(); });
  return out;
}

RatVec zeros(std::size_t n) { return RatVec(n, Rational(0)); }

Rational dot(const RatVec& a, const RatVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

Rational norm_sq(const RatVec& a) { return dot(a, a); }

RatVec add(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RatVec sub(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RatVec scale(const RatVec& a, const Rational& s) {
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

void axpy(const Rational& s, const RatVec& x, RatVec& y) {
  if (sgn(s) == 0) return;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) != 0) y[i] += s * x[i];
  }
}

bool is_zero(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

RatMat::RatMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMat RatMat::identity(std::size_t n) {
  RatMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMat RatMat::from_columns(const std::vector<RatVec>& columns, std::size_t rows) {
  RatMat m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

RatMat RatMat::from_flat(const RatVec& flat, std::size_t rows, std::size_t cols) {
  RatMat m(rows, cols);
  m.data_ = flat;
  return m;
}

RatVec RatMat::column(std::size_t c) const {
  RatVec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

RatVec RatMat::row(std::size_t r) const {
  return RatVec(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

RatVec RatMat::multiply(const RatVec& x) const {
  RatVec y = zeros(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const Rational& a = (*this)(r, c);
      if (sgn(a) != 0 && sgn(x[c]) != 0) y[r] += a * x[c];
    }
  }
  return y;
}

RatVec RatMat::multiply_transposed(const RatVec& y) const {
  RatVec x = zeros(cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (sgn(y[r]) == 0) continue;
    for (std::size_t c = 0; c < cols_; ++c) {
      const Rational& a = (*this)(r, c);
      if (sgn(a) != 0) x[c] += a * y[r];
    }
  }
  return x;
}

RatVec solve_square(RatMat A, RatVec b) {
  const std::size_t n = A.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(A(pivot, col)) == 0) ++pivot;
    if (pivot == n) throw SingularSystem("singular system in exact elimination");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(A(pivot, c), A(col, c));
      std::swap(b[pivot], b[col]);
    }
    const Rational inv = 1 / A(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(A(r, col)) == 0) continue;
      const Rational f = A(r, col) * inv;
      for (std::size_t c = col; c < n; ++c) {
        if (sgn(A(col, c)) != 0) A(r, c) -= f * A(col, c);
      }
      b[r] -= f * b[col];
    }
  }
  RatVec x = zeros(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) {
      if (sgn(A(i, c)) != 0) s -= A(i, c) * x[c];
    }
    x[i] = s / A(i, i);
  }
  return x;
}

RatVec solve_normal_equations(const RatMat& X, const RatVec& y) {
  const std::size_t k = X.cols();
  RatMat gram(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      Rational s = 0;
      for (std::size_t r = 0; r < X.rows(); ++r) {
        if (sgn(X(r, i)) != 0 && sgn(X(r, j)) != 0) s += X(r, i) * X(r, j);
      }
      gram(i, j) = s;
      gram(j, i) = s;
    }
  }
  try {
    return solve_square(std::move(gram), X.multiply_transposed(y));
  } catch (const SingularSystem&) {
    throw SingularSystem("normal equations are singular: columns are linearly dependent");
  }
}

namespace {

// Incremental echelon basis over the rationals.
class EchelonBasis {
 public:
  // Reduces v against the basis; if a nonzero remainder is left it becomes
  // a new basis vector and true is returned.
  bool insert(RatVec v) {
    for (std::size_t b = 0; b < rows_.size(); ++b) {
      const std::size_t p = pivots_[b];
      if (sgn(v[p]) == 0) continue;
      const Rational f = v[p] / rows_[b][p];
      axpy(-f, rows_[b], v);
    }
    for (std::size_t p = 0; p < v.size(); ++p) {
      if (sgn(v[p]) != 0) {
        rows_.push_back(std::move(v));
        pivots_.push_back(p);
        return true;
      }
    }
    return false;
  }

 private:
  std::vector<RatVec> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace

std::vector<std::size_t> independent_columns(const std::vector<RatVec>& columns) {
  std::vector<std::size_t> kept;
  EchelonBasis basis;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (basis.insert(columns[j])) kept.push_back(j);
  }
  return kept;
}

std::vector<std::size_t> independent_columns(const RatMat& M) {
  std::vector<RatVec> cols;
  cols.reserve(M.cols());
  for (std::size_t j = 0; j < M.cols(); ++j) cols.push_back(M.column(j));
  return independent_columns(cols);
}

std::size_t rank(const RatMat& M) { return independent_columns(M).size(); }

}  // namespace quadreg
