#pragma once

// Quadratically regularised optimal transport between two uniform N-point
// marginals, as a projection onto Gamma_N:
//   gamma_eta = proj_{Gamma_N}(-(2 eta / N^2) c),
// the minimiser of <c, gamma> + N^2 / (4 eta) |gamma|^2. With this scaling
// the optimal coupling is gamma_ij = (2 eta / N^2) max(0, f_i + g_j - c_ij)
// for dual potentials f, g.
//
// Matrix entries are 0-based here; the CLI and JSON reports are 1-based.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "quadreg/exactlin.hpp"

namespace quadreg {

struct DiscreteOTProblem {
  std::size_t n = 0;
  RatMat cost;  // n x n
};

// Validates shape; throws std::invalid_argument.
DiscreteOTProblem make_problem(RatMat cost);

struct Coupling {
  std::size_t n = 0;
  std::vector<double> weights;  // row-major n x n

  double operator()(std::size_t i, std::size_t j) const { return weights[i * n + j]; }
};

struct DualPotentials {
  RatVec f;
  RatVec g;
};

// The flat projection target -(2 eta / N^2) c.
RatVec qot_target(const DiscreteOTProblem& p, const Rational& eta);

// Throws SizeLimit for N > 6, std::invalid_argument for eta <= 0.
Coupling solve_qot(const DiscreteOTProblem& p, double eta, double tol = 1e-10);
RatMat solve_qot_exact(const DiscreteOTProblem& p, const Rational& eta);

// Exact row and column sums all equal to 1/N, entries nonnegative.
bool has_uniform_marginals(const RatMat& gamma);
bool has_uniform_marginals(const Coupling& gamma, double tol);

// gamma_ij = (2 eta / N^2) max(0, f_i + g_j - c_ij). The flag is true iff
// gamma has uniform marginals, in which case gamma solves the problem.
struct CertificateCheck {
  RatMat gamma;
  bool marginals_ok = false;
};
CertificateCheck verify_dual_certificate(const DiscreteOTProblem& p, const Rational& eta,
                                         const DualPotentials& pot);

struct CertificateCheckF {
  Coupling gamma;
  bool marginals_ok = false;
};
CertificateCheckF verify_dual_certificate(const DiscreteOTProblem& p, double eta, std::span<const double> f,
                                          std::span<const double> g, double tol);

// 5 x 5 cost with -11/10 on the diagonal, -1 on the rest of the first row
// and column, and 0 elsewhere.
DiscreteOTProblem counterexample_cost();

// Adds `shift` to every cost entry.
DiscreteOTProblem shifted(const DiscreteOTProblem& p, const Rational& shift);

// The exact coupling of the counterexample at eta = 5/2 and the potentials
// that induce it.
RatMat counterexample_gamma();
DualPotentials counterexample_potentials();

struct WeightPoint {
  double reg = 0.0;  // 1 / (2 eta)
  double weight = 0.0;
};

// gamma_eta(i, j) for each reg = 1/(2 eta) in the grid. Grid points are
// solved in parallel.
std::vector<WeightPoint> weight_curve(const DiscreteOTProblem& p, std::size_t i, std::size_t j,
                                      const std::vector<double>& reg_grid, double tol = 1e-10);
std::vector<WeightPoint> weight_curve_serial(const DiscreteOTProblem& p, std::size_t i, std::size_t j,
                                             const std::vector<double>& reg_grid, double tol = 1e-10);

// 0.005, 0.010, ..., 0.500.
std::vector<double> default_reg_grid();

inline constexpr double kSupportThreshold = 1e-9;

struct SupportViolation {
  double eta_prev = 0.0;
  double eta_next = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

struct SupportScanReport {
  bool monotone = true;
  std::optional<SupportViolation> violation;
};

// Solves on an increasing eta grid and reports the first consecutive pair
// whose thresholded support gains an entry.
SupportScanReport support_monotonicity_scan(const DiscreteOTProblem& p, const std::vector<double>& eta_grid,
                                            double threshold = kSupportThreshold, double tol = 1e-10);

}  // namespace quadreg
