#include "quadreg/qot.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quadreg/birkhoff.hpp"
#include "quadreg/errors.hpp"
#include "quadreg/polytope.hpp"

namespace quadreg {

DiscreteOTProblem make_problem(RatMat cost) {
  if (cost.rows() == 0 || cost.rows() != cost.cols()) throw std::invalid_argument("cost matrix must be square and nonempty");
  const std::size_t n = cost.rows();
  return {n, std::move(cost)};
}

RatVec qot_target(const DiscreteOTProblem& p, const Rational& eta) {
  const Rational s = -2 * eta / Rational(static_cast<long>(p.n * p.n));
  return scale(p.cost.flat(), s);
}

namespace {

Coupling solve_on(const VPolytope& gamma_n, const DiscreteOTProblem& p, double eta, double tol) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  const double s = -2.0 * eta / static_cast<double>(p.n * p.n);
  std::vector<double> target(p.n * p.n);
  for (std::size_t k = 0; k < target.size(); ++k) target[k] = s * p.cost.flat()[k].get_d();
  return {p.n, min_norm_point(gamma_n, target, tol)};
}

}  // namespace

Coupling solve_qot(const DiscreteOTProblem& p, double eta, double tol) {
  return solve_on(transport_polytope(p.n), p, eta, tol);
}

RatMat solve_qot_exact(const DiscreteOTProblem& p, const Rational& eta) {
  if (sgn(eta) <= 0) throw std::invalid_argument("eta must be positive");
  return RatMat::from_flat(exact_projection(transport_polytope(p.n), qot_target(p, eta)), p.n, p.n);
}

bool has_uniform_marginals(const RatMat& gamma) {
  const std::size_t n = gamma.rows();
  if (n == 0 || gamma.cols() != n) return false;
  const Rational mass = make_rational(1, static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Rational row = 0, col = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(gamma(i, j)) < 0) return false;
      row += gamma(i, j);
      col += gamma(j, i);
    }
    if (row != mass || col != mass) return false;
  }
  return true;
}

bool has_uniform_marginals(const Coupling& gamma, double tol) {
  const std::size_t n = gamma.n;
  const double mass = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (gamma(i, j) < -tol) return false;
      row += gamma(i, j);
      col += gamma(j, i);
    }
    if (std::abs(row - mass) > tol || std::abs(col - mass) > tol) return false;
  }
  return true;
}

CertificateCheck verify_dual_certificate(const DiscreteOTProblem& p, const Rational& eta,
                                         const DualPotentials& pot) {
  const std::size_t n = p.n;
  if (pot.f.size() != n || pot.g.size() != n) throw std::invalid_argument("potentials must have length N");
  const Rational factor = 2 * eta / Rational(static_cast<long>(n * n));
  CertificateCheck out{RatMat(n, n), false};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational slack = pot.f[i] + pot.g[j] - p.cost(i, j);
      if (sgn(slack) > 0) out.gamma(i, j) = factor * slack;
    }
  }
  out.marginals_ok = has_uniform_marginals(out.gamma);
  return out;
}

CertificateCheckF verify_dual_certificate(const DiscreteOTProblem& p, double eta, std::span<const double> f,
                                          std::span<const double> g, double tol) {
  const std::size_t n = p.n;
  if (f.size() != n || g.size() != n) throw std::invalid_argument("potentials must have length N");
  const double factor = 2.0 * eta / static_cast<double>(n * n);
  CertificateCheckF out{{n, std::vector<double>(n * n, 0.0)}, false};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      out.gamma.weights[i * n + j] = factor * std::max(0.0, f[i] + g[j] - p.cost(i, j).get_d());
  }
  out.marginals_ok = has_uniform_marginals(out.gamma, tol);
  return out;
}

DiscreteOTProblem counterexample_cost() {
  RatMat c(5, 5);
  for (std::size_t k = 1; k < 5; ++k) {
    c(0, k) = -1;
    c(k, 0) = -1;
  }
  for (std::size_t k = 0; k < 5; ++k) c(k, k) = make_rational(-11, 10);
  return {5, std::move(c)};
}

DiscreteOTProblem shifted(const DiscreteOTProblem& p, const Rational& shift) {
  DiscreteOTProblem out = p;
  for (std::size_t i = 0; i < p.n; ++i) {
    for (std::size_t j = 0; j < p.n; ++j) out.cost(i, j) += shift;
  }
  return out;
}

RatMat counterexample_gamma() {
  RatMat g(5, 5);
  for (std::size_t k = 1; k < 5; ++k) {
    g(0, k) = make_rational(1, 20);
    g(k, 0) = make_rational(1, 20);
    g(k, k) = make_rational(3, 20);
  }
  return g;
}

DualPotentials counterexample_potentials() {
  RatVec f{make_rational(-23, 40), make_rational(-7, 40), make_rational(-7, 40), make_rational(-7, 40),
           make_rational(-7, 40)};
  return {f, f};
}

std::vector<WeightPoint> weight_curve_serial(const DiscreteOTProblem& p, std::size_t i, std::size_t j,
                                             const std::vector<double>& reg_grid, double tol) {
  if (i >= p.n || j >= p.n) throw std::out_of_range("entry outside the cost matrix");
  const VPolytope gamma_n = transport_polytope(p.n);
  std::vector<WeightPoint> out(reg_grid.size());
  for (std::size_t k = 0; k < reg_grid.size(); ++k) {
    if (!(reg_grid[k] > 0.0)) throw std::invalid_argument("grid values must be positive");
    out[k] = {reg_grid[k], solve_on(gamma_n, p, 1.0 / (2.0 * reg_grid[k]), tol)(i, j)};
  }
  return out;
}

std::vector<WeightPoint> weight_curve(const DiscreteOTProblem& p, std::size_t i, std::size_t j,
                                      const std::vector<double>& reg_grid, double tol) {
  if (i >= p.n || j >= p.n) throw std::out_of_range("entry outside the cost matrix");
  for (double r : reg_grid) {
    if (!(r > 0.0)) throw std::invalid_argument("grid values must be positive");
  }
  const VPolytope gamma_n = transport_polytope(p.n);
  std::vector<WeightPoint> out(reg_grid.size());
  const auto count = static_cast<std::ptrdiff_t>(reg_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto u = static_cast<std::size_t>(k);
    out[u] = {reg_grid[u], solve_on(gamma_n, p, 1.0 / (2.0 * reg_grid[u]), tol)(i, j)};
  }
  return out;
}

std::vector<double> default_reg_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 100; ++k) grid.push_back(0.005 * k);
  return grid;
}

SupportScanReport support_monotonicity_scan(const DiscreteOTProblem& p, const std::vector<double>& eta_grid,
                                            double threshold, double tol) {
  if (!std::is_sorted(eta_grid.begin(), eta_grid.end())) throw std::invalid_argument("eta grid must be increasing");
  const VPolytope gamma_n = transport_polytope(p.n);
  std::vector<Coupling> sols(eta_grid.size());
  const auto count = static_cast<std::ptrdiff_t>(eta_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k)
    sols[static_cast<std::size_t>(k)] = solve_on(gamma_n, p, eta_grid[static_cast<std::size_t>(k)], tol);

  SupportScanReport report;
  for (std::size_t k = 1; k < sols.size(); ++k) {
    for (std::size_t e = 0; e < p.n * p.n; ++e) {
      if (sols[k - 1].weights[e] <= threshold && sols[k].weights[e] > threshold) {
        report.monotone = false;
        report.violation = SupportViolation{eta_grid[k - 1], eta_grid[k], e / p.n, e % p.n};
        return report;
      }
    }
  }
  return report;
}

}  // namespace quadreg
