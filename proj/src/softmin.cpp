#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "quadreg/regpath.hpp"

namespace quadreg {

namespace {

// x_i = max(0, y_i - tau) with sum x = 1.
template <typename T>
std::vector<T> simplex_threshold(std::vector<T> y) {
  if (y.empty()) throw std::invalid_argument("softmin needs at least one coordinate");
  std::vector<T> sorted = y;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  T prefix = 0;
  T tau = sorted[0] - 1;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    prefix += sorted[k];
    const T candidate = (prefix - 1) / static_cast<long>(k + 1);
    if (sorted[k] - candidate > 0) tau = candidate;
  }
  for (auto& v : y) v = v > tau ? T(v - tau) : T(0);
  return y;
}

}  // namespace

RatVec softmin(const RatVec& c, const Rational& eta) {
  if (sgn(eta) <= 0) throw std::invalid_argument("eta must be positive");
  return simplex_threshold(scale(c, -eta));
}

std::vector<double> softmin(std::span<const double> c, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  std::vector<double> y(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) y[i] = -eta * c[i];
  return simplex_threshold(std::move(y));
}

DeltaRange softmin_delta_range(const RatVec& c) {
  if (c.empty()) throw std::invalid_argument("cost must be nonempty");
  const Rational lowest = *std::min_element(c.begin(), c.end());
  const auto ties = std::count(c.begin(), c.end(), lowest);
  DeltaRange r;
  r.delta_min_sq = make_rational(1, static_cast<long>(c.size()));
  r.delta_max_sq = make_rational(1, static_cast<long>(ties));
  r.delta_min = 1.0 / std::sqrt(static_cast<double>(c.size()));
  r.delta_max = 1.0 / std::sqrt(static_cast<double>(ties));
  return r;
}

}  // namespace quadreg
