#include "quadreg/polytope.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "quadreg/errors.hpp"

namespace quadreg {

VPolytope::VPolytope(std::vector<RatVec> vertices) {
  if (vertices.empty()) throw std::invalid_argument("polytope needs at least one vertex");
  auto data = std::make_shared<Data>();
  data->dim = vertices.front().size();
  for (auto& v : vertices) {
    if (v.size() != data->dim) throw std::invalid_argument("vertices must share one dimension");
    if (std::find(data->vertices.begin(), data->vertices.end(), v) == data->vertices.end())
      data->vertices.push_back(std::move(v));
  }
  data->vertices_f.reserve(data->vertices.size() * data->dim);
  for (const auto& v : data->vertices) {
    for (const auto& q : v) data->vertices_f.push_back(q.get_d());
  }
  data_ = std::move(data);
}

VPolytope unit_simplex(std::size_t d) {
  if (d == 0) throw std::invalid_argument("simplex dimension must be positive");
  std::vector<RatVec> vs;
  for (std::size_t i = 0; i < d; ++i) {
    RatVec e = zeros(d);
    e[i] = 1;
    vs.push_back(std::move(e));
  }
  return VPolytope(std::move(vs));
}

FaceRef::FaceRef(VPolytope polytope, std::vector<std::size_t> indices)
    : polytope_(std::move(polytope)), indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (indices_.empty()) throw std::invalid_argument("face needs at least one vertex");
  if (indices_.back() >= polytope_.size()) throw std::out_of_range("face vertex index out of range");
}

FaceRef FaceRef::whole(const VPolytope& polytope) {
  std::vector<std::size_t> all(polytope.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return FaceRef(polytope, std::move(all));
}

std::vector<RatVec> FaceRef::vertices() const {
  std::vector<RatVec> out;
  out.reserve(indices_.size());
  for (auto i : indices_) out.push_back(polytope_.vertex(i));
  return out;
}

namespace {

struct AffineBasis {
  std::vector<std::size_t> chosen;  // indices into points (offset by one: point chosen[j]+1)
  RatMat X;
};

AffineBasis affine_basis(const std::vector<RatVec>& points) {
  const RatVec& base = points.front();
  std::vector<RatVec> diffs;
  diffs.reserve(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) diffs.push_back(sub(points[i], base));
  AffineBasis out;
  out.chosen = independent_columns(diffs);
  std::vector<RatVec> cols;
  cols.reserve(out.chosen.size());
  for (auto j : out.chosen) cols.push_back(std::move(diffs[j]));
  out.X = RatMat::from_columns(cols, base.size());
  return out;
}

}  // namespace

RatVec affine_projection(const std::vector<RatVec>& points, const RatVec& target) {
  if (points.empty()) throw std::invalid_argument("affine projection needs at least one point");
  const RatVec& base = points.front();
  const auto basis = affine_basis(points);
  if (basis.chosen.empty()) return base;
  const RatVec beta = solve_normal_equations(basis.X, sub(target, base));
  return add(base, basis.X.multiply(beta));
}

RatVec linear_projection(const std::vector<RatVec>& points, const RatVec& direction) {
  if (points.empty()) throw std::invalid_argument("linear projection needs at least one point");
  const auto basis = affine_basis(points);
  if (basis.chosen.empty()) return zeros(direction.size());
  return basis.X.multiply(solve_normal_equations(basis.X, direction));
}

RatVec affine_projection_origin(const FaceRef& face) {
  const auto pts = face.vertices();
  return affine_projection(pts, zeros(face.polytope().dim()));
}

RatVec affine_projection_weights(const FaceRef& face) {
  const auto pts = face.vertices();
  const auto basis = affine_basis(pts);
  RatVec weights = zeros(pts.size());
  weights[0] = 1;
  if (basis.chosen.empty()) return weights;
  const RatVec beta = solve_normal_equations(basis.X, scale(pts.front(), Rational(-1)));
  for (std::size_t j = 0; j < basis.chosen.size(); ++j) {
    weights[basis.chosen[j] + 1] = beta[j];
    weights[0] -= beta[j];
  }
  return weights;
}

bool contains(const FaceRef& face, const RatVec& x) {
  return lp_convex_weights(face.vertices(), x).has_value();
}

bool relint_contains(const FaceRef& face, const RatVec& x) {
  const auto r = lp_max_min_weight(face.vertices(), x);
  return r && sgn(r->t) > 0;
}

bool is_centered(const FaceRef& face) { return contains(face, affine_projection_origin(face)); }

FaceRef minimal_face(const VPolytope& polytope, const RatVec& x) {
  const auto& vs = polytope.vertices();
  const auto first = lp_convex_weights(vs, x);
  if (!first) throw NotInPolytope("point is not in the polytope");
  std::vector<bool> positive(vs.size(), false);
  auto mark = [&](const RatVec& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (sgn(w[i]) > 0) positive[i] = true;
    }
  };
  mark(*first);
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (positive[k]) continue;
    if (const auto w = lp_maximize_weight(vs, x, k)) mark(*w);
  }
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (positive[i]) idx.push_back(i);
  }
  return FaceRef(polytope, std::move(idx));
}

ResidualWitness<Rational> variational_inequality_residual(const VPolytope& polytope,
                                                          const RatVec& target, const RatVec& x) {
  const RatVec normal = sub(target, x);
  const Rational offset = dot(normal, x);
  ResidualWitness<Rational> best;
  for (std::size_t k = 0; k < polytope.size(); ++k) {
    Rational value = dot(normal, polytope.vertex(k)) - offset;
    if (k == 0 || value > best.value) {
      best.vertex = k;
      best.value = std::move(value);
    }
  }
  return best;
}

ResidualWitness<double> variational_inequality_residual(const VPolytope& polytope,
                                                        std::span<const double> target,
                                                        std::span<const double> x) {
  const std::size_t d = polytope.dim();
  const auto& vf = polytope.vertices_f();
  double offset = 0.0;
  for (std::size_t i = 0; i < d; ++i) offset += (target[i] - x[i]) * x[i];
  ResidualWitness<double> best;
  for (std::size_t k = 0; k < polytope.size(); ++k) {
    double value = -offset;
    for (std::size_t i = 0; i < d; ++i) value += (target[i] - x[i]) * vf[k * d + i];
    if (k == 0 || value > best.value) best = {k, value};
  }
  return best;
}

std::vector<double> min_norm_point(const VPolytope& polytope, std::span<const double> target,
                                   double tol) {
  return wolfe_projection(polytope, target, tol).point;
}

namespace {

bool certifies(const VPolytope& polytope, const std::vector<RatVec>& subset, const RatVec& target,
               const RatVec& candidate) {
  if (!lp_convex_weights(subset, candidate)) return false;
  return sgn(variational_inequality_residual(polytope, target, candidate).value) <= 0;
}

}  // namespace

RatVec exact_projection(const VPolytope& polytope, const RatVec& target) {
  const auto target_f = to_double(target);
  try {
    const auto seed = wolfe_projection(polytope, target_f, 1e-13);
    std::vector<RatVec> corral;
    for (auto k : seed.corral) corral.push_back(polytope.vertex(k));
    RatVec candidate = affine_projection(corral, target);
    if (certifies(polytope, corral, target, candidate)) return candidate;
  } catch (const IterationLimit&) {
    // fall through to enumeration
  }
  const std::size_t m = polytope.size();
  if (m > 14) throw DegenerateEvent("exact projection: Wolfe seed not certified and polytope too large to enumerate");
  // Subsets in order of increasing size; the first certified candidate is the projection.
  std::vector<std::uint32_t> masks(std::size_t{1} << m);
  std::iota(masks.begin(), masks.end(), 0u);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  for (auto mask : masks) {
    if (mask == 0) continue;
    std::vector<RatVec> subset;
    for (std::size_t k = 0; k < m; ++k) {
      if (mask & (1u << k)) subset.push_back(polytope.vertex(k));
    }
    RatVec candidate = affine_projection(subset, target);
    if (certifies(polytope, subset, target, candidate)) return candidate;
  }
  throw DegenerateEvent("exact projection: no certified candidate found");
}

namespace {

MonotonicityCertificate condition_one(const VPolytope& polytope) {
  MonotonicityCertificate cert;
  const FaceRef whole = FaceRef::whole(polytope);
  RatVec x0 = affine_projection_origin(whole);
  if (contains(whole, x0)) {
    cert.condition_i_holds = relint_contains(whole, x0);
    cert.min_norm_point = std::move(x0);
  } else {
    // proj_P(0) in relint P would force it to equal the affine-hull projection.
    cert.condition_i_holds = false;
    cert.min_norm_point = exact_projection(polytope, zeros(polytope.dim()));
  }
  if (!cert.condition_i_holds) {
    cert.verdict = Verdict::NotMonotone;
    cert.witness_projection = cert.min_norm_point;
  }
  return cert;
}

void attach_witness(MonotonicityCertificate& cert, const std::vector<FaceRef>& faces,
                    const std::vector<char>& centered) {
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (!centered[i]) {
      cert.verdict = Verdict::NotMonotone;
      cert.witness_face = faces[i];
      cert.witness_projection = affine_projection_origin(faces[i]);
      cert.witness_index = i;
      return;
    }
  }
}

}  // namespace

MonotonicityCertificate check_monotone(const VPolytope& polytope, const std::vector<FaceRef>& faces) {
  auto cert = condition_one(polytope);
  if (!cert.condition_i_holds) return cert;
  std::vector<char> centered(faces.size(), 1);
  const auto count = static_cast<std::ptrdiff_t>(faces.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    centered[static_cast<std::size_t>(i)] = is_centered(faces[static_cast<std::size_t>(i)]) ? 1 : 0;
  }
  attach_witness(cert, faces, centered);
  return cert;
}

MonotonicityCertificate check_monotone_serial(const VPolytope& polytope,
                                              const std::vector<FaceRef>& faces) {
  auto cert = condition_one(polytope);
  if (!cert.condition_i_holds) return cert;
  std::vector<char> centered(faces.size(), 1);
  for (std::size_t i = 0; i < faces.size(); ++i) {
    centered[i] = is_centered(faces[i]) ? 1 : 0;
    if (!centered[i]) break;
  }
  attach_witness(cert, faces, centered);
  return cert;
}

std::vector<FaceRef> simplex_faces(const VPolytope& simplex) {
  const std::size_t d = simplex.size();
  if (d > 20) throw SizeLimit("simplex face enumeration limited to d <= 20");
  std::vector<FaceRef> faces;
  for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    faces.emplace_back(simplex, std::move(idx));
  }
  return faces;
}

}  // namespace quadreg
