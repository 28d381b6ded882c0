#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "quadreg/exactlin.hpp"

namespace quadreg {

// A polytope given by its vertex list. Immutable; copies share storage.
class VPolytope {
 public:
  // Deduplicates (first occurrence wins). Throws std::invalid_argument on an
  // empty list or mismatched dimensions.
  explicit VPolytope(std::vector<RatVec> vertices);

  const std::vector<RatVec>& vertices() const { return data_->vertices; }
  const RatVec& vertex(std::size_t i) const { return data_->vertices[i]; }
  // Row-major float copy (size() x dim()) used by the Wolfe solver.
  const std::vector<double>& vertices_f() const { return data_->vertices_f; }
  std::size_t size() const { return data_->vertices.size(); }
  std::size_t dim() const { return data_->dim; }

 private:
  struct Data {
    std::vector<RatVec> vertices;
    std::vector<double> vertices_f;
    std::size_t dim = 0;
  };
  std::shared_ptr<const Data> data_;
};

VPolytope unit_simplex(std::size_t d);

// A face named by a subset of the parent's vertices.
class FaceRef {
 public:
  // Sorts and deduplicates `indices`; throws std::out_of_range on an invalid
  // index and std::invalid_argument on an empty set.
  FaceRef(VPolytope polytope, std::vector<std::size_t> indices);
  static FaceRef whole(const VPolytope& polytope);

  const VPolytope& polytope() const { return polytope_; }
  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  std::vector<RatVec> vertices() const;

 private:
  VPolytope polytope_;
  std::vector<std::size_t> indices_;
};

// Exact projection of `target` onto aff(points): with v1 the first point and
// X the greedy-independent columns among (v_i - v1), returns
// v1 + X * solve_normal_equations(X, target - v1).
RatVec affine_projection(const std::vector<RatVec>& points, const RatVec& target);

// Exact projection of `direction` onto the linear span of (v_i - v1).
RatVec linear_projection(const std::vector<RatVec>& points, const RatVec& direction);

RatVec affine_projection_origin(const FaceRef& face);

// One affine weight vector (sum = 1) over face.indices() reproducing
// affine_projection_origin(face). Unique only when the vertices are affinely
// independent; otherwise this is the weight vector of the greedy basis.
RatVec affine_projection_weights(const FaceRef& face);

bool contains(const FaceRef& face, const RatVec& x);
bool relint_contains(const FaceRef& face, const RatVec& x);
bool is_centered(const FaceRef& face);

// The unique face with x in its relative interior. Throws NotInPolytope.
FaceRef minimal_face(const VPolytope& polytope, const RatVec& x);

template <typename T>
struct ResidualWitness {
  std::size_t vertex = 0;
  T value{};
};

// max over vertices v of <target - x, v - x>; x = proj(target) iff <= 0.
ResidualWitness<Rational> variational_inequality_residual(const VPolytope& polytope,
                                                          const RatVec& target, const RatVec& x);
ResidualWitness<double> variational_inequality_residual(const VPolytope& polytope,
                                                        std::span<const double> target,
                                                        std::span<const double> x);

// ---------------------------------------------------------------------------
// Wolfe's min-norm-point algorithm (floating point).

inline constexpr double kWolfeDefaultTolerance = 1e-10;

struct WolfeResult {
  std::vector<double> point;
  std::vector<std::size_t> corral;  // active vertex indices, ascending
  std::vector<double> weights;      // convex weights aligned with corral
  double residual = 0.0;            // variational-inequality residual at point
  std::size_t iterations = 0;
};

// Projection of `target` onto the polytope. Runs Wolfe on the shifted
// points {v - target}. Throws IterationLimit when the cap of
// 10 * (vertex count)^2 minor cycles is exceeded.
WolfeResult wolfe_projection(const VPolytope& polytope, std::span<const double> target,
                             double tol = kWolfeDefaultTolerance);

std::vector<double> min_norm_point(const VPolytope& polytope, std::span<const double> target,
                                   double tol = kWolfeDefaultTolerance);

// Exact projection of a rational target. Seeds from Wolfe's corral and
// certifies the candidate with the exact variational inequality; falls back to
// subset enumeration for polytopes with at most 14 vertices. Throws
// DegenerateEvent if neither route certifies a point.
RatVec exact_projection(const VPolytope& polytope, const RatVec& target);

// ---------------------------------------------------------------------------
// Monotonicity certificate.

enum class Verdict { Monotone, NotMonotone };

struct MonotonicityCertificate {
  Verdict verdict = Verdict::Monotone;
  bool condition_i_holds = true;
  RatVec min_norm_point;                      // exact projection of the origin onto P
  std::optional<FaceRef> witness_face;        // first non-centered face, in input order
  std::optional<RatVec> witness_projection;   // its affine-hull projection of the origin
  std::optional<std::size_t> witness_index;   // position of witness_face in the input list
};

// `faces` must enumerate the nonempty faces of P (any order). Faces are
// tested in parallel; the reported witness is the first in input order.
MonotonicityCertificate check_monotone(const VPolytope& polytope, const std::vector<FaceRef>& faces);

// Serial reference for check_monotone.
MonotonicityCertificate check_monotone_serial(const VPolytope& polytope,
                                              const std::vector<FaceRef>& faces);

// All 2^d - 1 vertex subsets of the unit simplex as faces.
std::vector<FaceRef> simplex_faces(const VPolytope& simplex);

}  // namespace quadreg
