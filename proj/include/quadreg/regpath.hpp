#pragma once

// Regularised linear programs over a polytope P:
//   Lagrangian  x_eta   = argmin <c,x> + |x|^2 / (2 eta) = proj_P(-eta c)
//   Eulerian    x^delta = argmin <c,x>  s.t.  |x| <= delta
// and an exact tracer for the piecewise-affine curve eta -> x_eta on
// polytopes whose faces are cut out by zero patterns (simplex, Pi_N, Gamma_N).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "quadreg/exactlin.hpp"
#include "quadreg/polytope.hpp"

namespace quadreg {

enum class PathFamily { Simplex, Birkhoff, Transport };

// A polytope of the form {x >= 0, affine equalities}: each face is the set
// of points vanishing off a coordinate mask. At most 64 coordinates.
struct PathPolytope {
  PathFamily family = PathFamily::Simplex;
  std::size_t n = 0;  // d for the simplex, N otherwise
  VPolytope polytope;

  static PathPolytope simplex(std::size_t d);
  static PathPolytope birkhoff(std::size_t n);
  static PathPolytope transport(std::size_t n);
};

struct PathSegment {
  Rational eta_lo;
  std::optional<Rational> eta_hi;  // nullopt = +infinity
  RatVec x0;                       // proj_{aff F}(0)
  RatVec d;                        // proj_{lin F}(-c)
  std::uint64_t support = 0;       // coordinate mask of F
  FaceRef face;

  RatVec at(const Rational& eta) const;
  std::vector<double> at(double eta) const;
  bool contains_eta(const Rational& eta) const;
};

struct RegPath {
  std::vector<PathSegment> segments;
  Rational delta_min_sq;  // |x_0|^2
  Rational delta_max_sq;  // |x_inf|^2
  double delta_min = 0.0;
  double delta_max = 0.0;
  Rational eta_stationary;  // start of the final (d = 0) segment
  // True when some breakpoint needed the floating-point face selection.
  bool fallback_used = false;

  const PathSegment& segment_at(const Rational& eta) const;
  RatVec at(const Rational& eta) const;
};

// Exact event-driven tracer. Throws DegenerateEvent when neither the exact
// candidate search nor the float fallback yields a verified segment.
RegPath trace_path_exact(const PathPolytope& p, const RatVec& c);

struct MonotonicityWitness {
  Rational eta_lost;      // first eta at which the coordinate is zero
  Rational eta_regained;  // later eta at which it is positive again
  std::size_t index = 0;  // flat coordinate index (0-based)
};

struct CMonotoneResult {
  bool monotone = true;
  std::optional<MonotonicityWitness> witness;
};

// Scans supports in eta order (breakpoints and segment interiors) and
// reports the first coordinate that leaves the support and later returns.
CMonotoneResult check_c_monotone(const RegPath& path);

// min_norm_point(P, -eta c, tol).
std::vector<double> solve_lagrangian(const VPolytope& polytope, std::span<const double> c, double eta,
                                     double tol = kWolfeDefaultTolerance);

// Minimiser of <c,x> over P intersected with the ball of radius delta, by
// bisection over eta on |x_eta| = delta. Throws DeltaOutOfRange outside
// [delta_min - tol, delta_max + tol].
std::vector<double> solve_eulerian(const VPolytope& polytope, const RatVec& c, double delta,
                                   double tol = kWolfeDefaultTolerance);

double eta_to_delta(const RegPath& path, const Rational& eta);
// Smallest eta with |x_eta| = delta. Throws DeltaOutOfRange.
double delta_to_eta(const RegPath& path, double delta);

// ---------------------------------------------------------------------------
// Sparse soft-min: proj_Delta(-eta c) by sort-and-threshold.

RatVec softmin(const RatVec& c, const Rational& eta);
std::vector<double> softmin(std::span<const double> c, double eta);

struct DeltaRange {
  Rational delta_min_sq;  // 1/d
  Rational delta_max_sq;  // 1/#argmin c
  double delta_min = 0.0;
  double delta_max = 0.0;
};

DeltaRange softmin_delta_range(const RatVec& c);

}  // namespace quadreg
