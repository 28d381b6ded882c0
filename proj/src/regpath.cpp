#include "quadreg/regpath.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "quadreg/birkhoff.hpp"
#include "quadreg/errors.hpp"

namespace quadreg {

PathPolytope PathPolytope::simplex(std::size_t d) {
  if (d > 64) throw SizeLimit("path tracing is limited to 64 coordinates");
  return {PathFamily::Simplex, d, unit_simplex(d)};
}

PathPolytope PathPolytope::birkhoff(std::size_t n) { return {PathFamily::Birkhoff, n, birkhoff_polytope(n)}; }

PathPolytope PathPolytope::transport(std::size_t n) { return {PathFamily::Transport, n, transport_polytope(n)}; }

RatVec PathSegment::at(const Rational& eta) const {
  RatVec x = x0;
  axpy(eta, d, x);
  return x;
}

std::vector<double> PathSegment::at(double eta) const {
  std::vector<double> x(x0.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = x0[i].get_d() + eta * d[i].get_d();
  return x;
}

bool PathSegment::contains_eta(const Rational& eta) const {
  return eta >= eta_lo && (!eta_hi || eta <= *eta_hi);
}

const PathSegment& RegPath::segment_at(const Rational& eta) const {
  if (segments.empty()) throw std::logic_error("empty path");
  if (sgn(eta) < 0) throw std::invalid_argument("eta must be nonnegative");
  for (const auto& s : segments) {
    if (s.contains_eta(eta)) return s;
  }
  return segments.back();
}

RatVec RegPath::at(const Rational& eta) const { return segment_at(eta).at(eta); }

namespace {

constexpr std::size_t kMaxSegments = 100000;
constexpr std::size_t kMaxFreeCoordinates = 20;
constexpr double kFallbackSupportThreshold = 1e-9;

std::uint64_t support_of(const RatVec& x) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sgn(x[i]) != 0) m |= std::uint64_t{1} << i;
  }
  return m;
}

class Tracer {
 public:
  Tracer(const PathPolytope& p, const RatVec& c) : p_(p), poly_(p.polytope), c_(c) {
    if (c.size() != poly_.dim()) throw std::invalid_argument("cost dimension does not match polytope");
    if (poly_.dim() > 64) throw SizeLimit("path tracing is limited to 64 coordinates");
    for (const auto& v : poly_.vertices()) vertex_support_.push_back(support_of(v));
  }

  RegPath run() {
    RegPath path;
    Rational eta = 0;
    RatVec x = exact_projection(poly_, zeros(poly_.dim()));
    path.delta_min_sq = norm_sq(x);
    for (;;) {
      if (path.segments.size() >= kMaxSegments) throw DegenerateEvent("segment limit exceeded");
      auto seg = next_segment(eta, x, path.fallback_used);
      const bool last = !seg.eta_hi;
      if (!last) {
        eta = *seg.eta_hi;
        x = seg.at(eta);
      }
      path.segments.push_back(std::move(seg));
      if (last) break;
    }
    const auto& tail = path.segments.back();
    path.eta_stationary = tail.eta_lo;
    path.delta_max_sq = norm_sq(tail.x0);
    path.delta_min = std::sqrt(path.delta_min_sq.get_d());
    path.delta_max = std::sqrt(path.delta_max_sq.get_d());
    return path;
  }

 private:
  std::uint64_t closure(std::uint64_t mask) const {
    std::uint64_t out = 0;
    for (auto s : vertex_support_) {
      if ((s & ~mask) == 0) out |= s;
    }
    return out;
  }

  std::vector<std::size_t> vertices_in(std::uint64_t mask) const {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < vertex_support_.size(); ++k) {
      if ((vertex_support_[k] & ~mask) == 0) idx.push_back(k);
    }
    return idx;
  }

  struct Candidate {
    PathSegment seg;
    bool valid = false;
  };

  PathSegment make_segment(const Rational& eta_lo, std::uint64_t mask) const {
    auto idx = vertices_in(mask);
    if (idx.empty()) throw DegenerateEvent("empty face mask");
    FaceRef face(poly_, std::move(idx));
    const auto pts = face.vertices();
    PathSegment seg{eta_lo, std::nullopt, affine_projection(pts, zeros(poly_.dim())),
                    linear_projection(pts, scale(c_, Rational(-1))), mask, std::move(face)};
    return seg;
  }

  // Checks that x(eta) leaves x_star into relint F with a valid variational
  // inequality against the tight vertices W.
  bool starts_correctly(const PathSegment& seg, std::uint64_t star_support,
                        const std::vector<std::size_t>& tight) const {
    const std::uint64_t fresh = seg.support & ~star_support;
    for (std::size_t i = 0; i < poly_.dim(); ++i) {
      if ((fresh >> i) & 1u) {
        if (sgn(seg.d[i]) <= 0) return false;
      }
    }
    const RatVec cd = add(c_, seg.d);
    for (auto k : tight) {
      if ((vertex_support_[k] & ~seg.support) == 0) continue;
      if (sgn(dot(cd, sub(poly_.vertex(k), seg.x0))) < 0) return false;
    }
    return true;
  }

  void set_end(PathSegment& seg) const {
    std::optional<Rational> end;
    auto consider = [&](const Rational& e) {
      if (e > seg.eta_lo && (!end || e < *end)) end = e;
    };
    for (std::size_t i = 0; i < poly_.dim(); ++i) {
      if (sgn(seg.d[i]) < 0) consider(-seg.x0[i] / seg.d[i]);
    }
    const RatVec cd = add(c_, seg.d);
    const RatVec neg_x0 = scale(seg.x0, Rational(-1));
    for (std::size_t k = 0; k < poly_.size(); ++k) {
      if ((vertex_support_[k] & ~seg.support) == 0) continue;
      const RatVec diff = sub(poly_.vertex(k), seg.x0);
      const Rational slope = dot(cd, diff);
      if (sgn(slope) < 0) consider(dot(neg_x0, diff) / slope);
    }
    seg.eta_hi = end;
    if (!end && !is_zero(seg.d)) throw DegenerateEvent("unbounded segment with nonzero direction");
  }

  bool verified(const PathSegment& seg) const {
    const Rational mid = seg.eta_hi ? Rational((seg.eta_lo + *seg.eta_hi) / 2) : Rational(seg.eta_lo + 1);
    const RatVec x = seg.at(mid);
    for (const auto& q : x) {
      if (sgn(q) < 0) return false;
    }
    if (support_of(x) != seg.support) return false;
    return sgn(variational_inequality_residual(poly_, scale(c_, -mid), x).value) <= 0;
  }

  std::optional<PathSegment> try_mask(const Rational& eta, std::uint64_t mask, std::uint64_t star_support,
                                      const std::vector<std::size_t>& tight) const {
    if (closure(mask) != mask) return std::nullopt;
    auto seg = make_segment(eta, mask);
    if (!starts_correctly(seg, star_support, tight)) return std::nullopt;
    set_end(seg);
    if (!verified(seg)) return std::nullopt;
    return seg;
  }

  PathSegment next_segment(const Rational& eta, const RatVec& x_star, bool& fallback_used) const {
    const std::uint64_t star_support = support_of(x_star);
    const RatVec normal = sub(scale(c_, -eta), x_star);
    const Rational offset = dot(normal, x_star);
    std::vector<std::size_t> tight;
    std::uint64_t outer = 0;
    for (std::size_t k = 0; k < poly_.size(); ++k) {
      if (dot(normal, poly_.vertex(k)) == offset) {
        tight.push_back(k);
        outer |= vertex_support_[k];
      }
    }

    // Pivot hints: stay on the minimal face of x*, or grow it by one tight vertex.
    if (auto s = try_mask(eta, star_support, star_support, tight)) return std::move(*s);
    std::vector<std::uint64_t> tried{star_support};
    for (auto k : tight) {
      const std::uint64_t m = closure(star_support | vertex_support_[k]);
      if (std::find(tried.begin(), tried.end(), m) != tried.end()) continue;
      tried.push_back(m);
      if (auto s = try_mask(eta, m, star_support, tight)) return std::move(*s);
    }

    const std::uint64_t free = outer & ~star_support;
    const auto nfree = static_cast<std::size_t>(std::popcount(free));
    if (nfree <= kMaxFreeCoordinates) {
      std::vector<std::size_t> bits;
      for (std::size_t i = 0; i < 64; ++i) {
        if ((free >> i) & 1u) bits.push_back(i);
      }
      std::vector<std::uint32_t> subsets(std::size_t{1} << nfree);
      for (std::uint32_t s = 0; s < subsets.size(); ++s) subsets[s] = s;
      std::stable_sort(subsets.begin(), subsets.end(),
                       [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
      for (auto s : subsets) {
        std::uint64_t m = star_support;
        for (std::size_t j = 0; j < nfree; ++j) {
          if ((s >> j) & 1u) m |= std::uint64_t{1} << bits[j];
        }
        if (std::find(tried.begin(), tried.end(), m) != tried.end()) continue;
        if (auto seg = try_mask(eta, m, star_support, tight)) return std::move(*seg);
      }
    }

    // Float fallback: read the face off a projection just past the event.
    fallback_used = true;
    const double probe = eta.get_d() + std::ldexp(1.0, -20);
    std::vector<double> target(poly_.dim());
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = -probe * c_[i].get_d();
    const auto y = min_norm_point(poly_, target, 1e-13);
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] > kFallbackSupportThreshold) m |= std::uint64_t{1} << i;
    }
    m = closure(m | star_support);
    auto seg = make_segment(eta, m);
    set_end(seg);
    if (!verified(seg)) throw DegenerateEvent("no verified face at eta = " + to_string(eta));
    return seg;
  }

  const PathPolytope& p_;
  const VPolytope& poly_;
  const RatVec& c_;
  std::vector<std::uint64_t> vertex_support_;
};

}  // namespace

RegPath trace_path_exact(const PathPolytope& p, const RatVec& c) { return Tracer(p, c).run(); }

CMonotoneResult check_c_monotone(const RegPath& path) {
  CMonotoneResult out;
  if (path.segments.empty()) return out;
  const std::size_t dim = path.segments.front().x0.size();
  std::vector<std::optional<Rational>> lost(dim);
  auto visit = [&](const Rational& eta, std::uint64_t support) {
    for (std::size_t i = 0; i < dim; ++i) {
      const bool in = (support >> i) & 1u;
      if (!in && !lost[i]) lost[i] = eta;
      if (in && lost[i]) {
        out.monotone = false;
        out.witness = MonotonicityWitness{*lost[i], eta, i};
        return true;
      }
    }
    return false;
  };
  for (const auto& seg : path.segments) {
    if (visit(seg.eta_lo, support_of(seg.at(seg.eta_lo)))) return out;
    if (visit(seg.eta_lo, seg.support)) return out;
  }
  return out;
}

std::vector<double> solve_lagrangian(const VPolytope& polytope, std::span<const double> c, double eta,
                                     double tol) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (c.size() != polytope.dim()) throw std::invalid_argument("cost dimension does not match polytope");
  std::vector<double> target(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) target[i] = -eta * c[i];
  return min_norm_point(polytope, target, tol);
}

namespace {

double norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> solve_eulerian(const VPolytope& polytope, const RatVec& c, double delta, double tol) {
  if (c.size() != polytope.dim()) throw std::invalid_argument("cost dimension does not match polytope");
  const std::vector<double> origin(polytope.dim(), 0.0);
  const auto x_min = min_norm_point(polytope, origin, tol);

  // x_inf: min-norm point of the face of LP minimisers.
  std::vector<RatVec> best;
  Rational best_value;
  for (const auto& v : polytope.vertices()) {
    Rational value = dot(c, v);
    if (best.empty() || value < best_value) {
      best.clear();
      best_value = value;
    }
    if (value == best_value) best.push_back(v);
  }
  const auto x_inf = min_norm_point(VPolytope(best), origin, tol);

  const double delta_min = norm(x_min);
  const double delta_max = norm(x_inf);
  if (delta < delta_min - tol || delta > delta_max + tol)
    throw DeltaOutOfRange("delta outside [" + std::to_string(delta_min) + ", " + std::to_string(delta_max) + "]");
  if (std::abs(delta - delta_min) <= tol) return x_min;
  if (std::abs(delta - delta_max) <= tol) return x_inf;

  const auto cf = to_double(c);
  auto at = [&](double eta) { return solve_lagrangian(polytope, cf, eta, std::min(tol, 1e-12)); };
  double lo = 0.0;
  double hi = 1.0;
  auto x_hi = at(hi);
  while (norm(x_hi) < delta) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) return x_inf;
    x_hi = at(hi);
  }
  auto x = x_hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    x = at(mid);
    const double r = norm(x);
    if (std::abs(r - delta) <= 1e-12) break;
    (r < delta ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return x;
}

double eta_to_delta(const RegPath& path, const Rational& eta) {
  return std::sqrt(norm_sq(path.at(eta)).get_d());
}

double delta_to_eta(const RegPath& path, double delta) {
  constexpr double slack = 1e-12;
  if (delta < path.delta_min - slack || delta > path.delta_max + slack)
    throw DeltaOutOfRange("delta outside the path's range");
  const double target = delta * delta;
  for (const auto& seg : path.segments) {
    const double a = norm_sq(seg.d).get_d();
    const double b = 2.0 * dot(seg.x0, seg.d).get_d();
    const double c0 = norm_sq(seg.x0).get_d();
    const double lo = seg.eta_lo.get_d();
    const double r_lo = c0 + lo * (b + lo * a);
    if (target <= r_lo + slack) return lo;
    if (!seg.eta_hi) break;
    const double hi = seg.eta_hi->get_d();
    const double r_hi = c0 + hi * (b + hi * a);
    if (target > r_hi + slack) continue;
    if (a == 0.0) return lo;
    const double disc = std::max(0.0, b * b - 4.0 * a * (c0 - target));
    return std::clamp((-b + std::sqrt(disc)) / (2.0 * a), lo, hi);
  }
  return path.eta_stationary.get_d();
}

}  // namespace quadreg
