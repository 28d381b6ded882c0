// Wolfe's min-norm-point algorithm over a finite point set.
//
// The projection of t onto conv(V) is t + argmin{|y| : y in conv(V - t)}.
// Each major cycle adds the vertex minimising <x, p> (ties: lowest index);
// minor cycles move to the affine minimiser of the corral and drop points
// whose weight would turn negative.

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>

#include "quadreg/errors.hpp"
#include "quadreg/polytope.hpp"

namespace quadreg {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kPositiveWeight = 1e-14;

// Affine weights alpha (sum 1) minimising |P_S alpha|.
VectorXd affine_minimizer(const MatrixXd& points, const std::vector<std::size_t>& corral) {
  const auto k = static_cast<Eigen::Index>(corral.size());
  VectorXd alpha(k);
  if (k == 1) {
    alpha(0) = 1.0;
    return alpha;
  }
  const VectorXd base = points.col(static_cast<Eigen::Index>(corral[0]));
  MatrixXd B(points.rows(), k - 1);
  for (Eigen::Index j = 1; j < k; ++j) B.col(j - 1) = points.col(static_cast<Eigen::Index>(corral[j])) - base;
  const VectorXd beta = B.completeOrthogonalDecomposition().solve(-base);
  alpha(0) = 1.0 - beta.sum();
  alpha.tail(k - 1) = beta;
  return alpha;
}

VectorXd combine(const MatrixXd& points, const std::vector<std::size_t>& corral, const VectorXd& w) {
  VectorXd x = VectorXd::Zero(points.rows());
  for (std::size_t i = 0; i < corral.size(); ++i)
    x += w(static_cast<Eigen::Index>(i)) * points.col(static_cast<Eigen::Index>(corral[i]));
  return x;
}

}  // namespace

WolfeResult wolfe_projection(const VPolytope& polytope, std::span<const double> target, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("Wolfe tolerance must be positive");
  const std::size_t m = polytope.size();
  const std::size_t d = polytope.dim();
  if (target.size() != d) throw std::invalid_argument("target dimension mismatch");

  MatrixXd points(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(m));
  const auto& vf = polytope.vertices_f();
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < d; ++i)
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = vf[k * d + i] - target[i];
  }

  const std::size_t cap = std::max<std::size_t>(10 * m * m, 100);
  std::size_t iterations = 0;

  const VectorXd norms = points.colwise().squaredNorm();
  Eigen::Index start = 0;
  for (Eigen::Index k = 1; k < norms.size(); ++k) {
    if (norms(k) < norms(start)) start = k;
  }
  std::vector<std::size_t> corral{static_cast<std::size_t>(start)};
  VectorXd lambda = VectorXd::Ones(1);
  VectorXd x = points.col(start);
  double gap = 0.0;

  for (;;) {
    const VectorXd dots = points.transpose() * x;
    Eigen::Index j = 0;
    for (Eigen::Index k = 1; k < dots.size(); ++k) {
      if (dots(k) < dots(j)) j = k;
    }
    gap = x.squaredNorm() - dots(j);
    if (gap <= tol) break;
    if (std::find(corral.begin(), corral.end(), static_cast<std::size_t>(j)) != corral.end())
      throw IterationLimit("Wolfe stalled: minimising vertex already in the corral (gap " +
                           std::to_string(gap) + ")");
    corral.push_back(static_cast<std::size_t>(j));
    lambda.conservativeResize(lambda.size() + 1);
    lambda(lambda.size() - 1) = 0.0;

    for (;;) {
      if (++iterations > cap) throw IterationLimit("Wolfe iteration cap exceeded");
      const VectorXd alpha = affine_minimizer(points, corral);
      if ((alpha.array() > kPositiveWeight).all()) {
        lambda = alpha;
        x = combine(points, corral, lambda);
        break;
      }
      double theta = 1.0;
      Eigen::Index blocking = -1;
      for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (alpha(i) <= kPositiveWeight) {
          const double denom = lambda(i) - alpha(i);
          const double t = denom > 0.0 ? lambda(i) / denom : 0.0;
          if (blocking < 0 || t < theta) {
            theta = t;
            blocking = i;
          }
        }
      }
      lambda = theta * alpha + (1.0 - theta) * lambda;
      lambda(blocking) = 0.0;
      std::vector<std::size_t> kept_corral;
      std::vector<double> kept_weights;
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) > 0.0) {
          kept_corral.push_back(corral[static_cast<std::size_t>(i)]);
          kept_weights.push_back(lambda(i));
        }
      }
      corral = std::move(kept_corral);
      lambda = Eigen::Map<VectorXd>(kept_weights.data(), static_cast<Eigen::Index>(kept_weights.size()));
      lambda /= lambda.sum();
      x = combine(points, corral, lambda);
    }
  }

  WolfeResult out;
  out.iterations = iterations;
  out.residual = gap;
  out.point.resize(d);
  for (std::size_t i = 0; i < d; ++i) out.point[i] = x(static_cast<Eigen::Index>(i)) + target[i];

  std::vector<std::size_t> order(corral.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return corral[a] < corral[b]; });
  for (auto o : order) {
    out.corral.push_back(corral[o]);
    out.weights.push_back(lambda(static_cast<Eigen::Index>(o)));
  }
  return out;
}

}  // namespace quadreg
