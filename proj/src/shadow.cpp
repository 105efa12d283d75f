#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "sympcap/bodies.hpp"
#include "sympcap/error.hpp"

namespace sympcap {

ShadowEvaluator::ShadowEvaluator(const Body& k, const ShadowOptions& options) : dim_(k.dim()) {
  half_dim(k.dim());
  const Body flat = flatten(k);
  if (const auto* e = std::get_if<Ellipsoid>(&flat.rep())) {
    covariance_ = e->shape.inverse();
    return;
  }
  if (auto verts = polytope_vertices(flat, options.limits)) {
    points_ = std::move(*verts);
    return;
  }
  if (options.smooth_samples < 3) fail(ErrorCode::kDomain, "shadow: need at least three boundary samples");
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Mat pts(options.smooth_samples, k.dim());
  for (int i = 0; i < options.smooth_samples; ++i) {
    Vec x(k.dim());
    for (auto& c : x) c = normal(rng);
    pts.row(i) = (x / gauge(k, x)).transpose();
  }
  points_ = std::move(pts);
}

double ShadowEvaluator::operator()(const Mat& linear) const {
  if (linear.rows() != dim_ || linear.cols() != dim_) fail(ErrorCode::kDimension, "shadow: map size mismatch");
  const Eigen::Index n = dim_ / 2;
  Mat plane(2, dim_);
  plane.row(0) = linear.row(0);
  plane.row(1) = linear.row(n);
  if (covariance_) {
    const Eigen::Matrix2d block = plane * *covariance_ * plane.transpose();
    return std::numbers::pi * std::sqrt(std::max(0.0, block.determinant()));
  }
  const Mat projected = *points_ * plane.transpose();
  return polygon_area(convex_hull_2d(projected));
}

double shadow_area(const Body& k, const SymplecticMap& s, const ShadowOptions& options) {
  if (s.linear().rows() != k.dim()) fail(ErrorCode::kDimension, "shadow: map does not match body");
  return ShadowEvaluator(k, options)(s.linear());
}

Mat convex_hull_2d(const Mat& points) {
  if (points.cols() != 2) fail(ErrorCode::kDimension, "convex_hull_2d: points must be planar");
  std::vector<Eigen::Vector2d> p;
  p.reserve(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) p.emplace_back(points(i, 0), points(i, 1));
  std::sort(p.begin(), p.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) {
    Mat out(static_cast<Eigen::Index>(p.size()), 2);
    for (std::size_t i = 0; i < p.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = p[i].transpose();
    return out;
  }

  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> hull(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, lower = k + 1; i > 0; --i) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p[i - 1]) <= 0) --k;
    hull[k++] = p[i - 1];
  }
  hull.resize(k - 1);

  Mat out(static_cast<Eigen::Index>(hull.size()), 2);
  for (std::size_t i = 0; i < hull.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = hull[i].transpose();
  return out;
}

double polygon_area(const Mat& polygon) {
  const Eigen::Index m = polygon.rows();
  if (m < 3) return 0.0;
  double twice = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = (i + 1) % m;
    twice += polygon(i, 0) * polygon(j, 1) - polygon(j, 0) * polygon(i, 1);
  }
  return 0.5 * std::abs(twice);
}

RogersShephardPlanar rs_planar_check(const Mat& polygon, const Eigen::Vector2d& direction) {
  if (!(direction.norm() > 0.0)) fail(ErrorCode::kDomain, "rs_planar_check: zero direction");
  const Mat hull = convex_hull_2d(polygon);
  if (hull.rows() < 3) fail(ErrorCode::kDomain, "rs_planar_check: degenerate polygon");
  const Eigen::Vector2d d = direction.normalized();
  const Eigen::Vector2d e(-d.y(), d.x());

  const Vec along = hull * d;
  RogersShephardPlanar out{};
  out.area = polygon_area(hull);
  out.projection_length = along.maxCoeff() - along.minCoeff();

  // Clip the line {t e} against the edge half-planes of the CCW hull.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const Eigen::Index m = hull.rows();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Vector2d a = hull.row(i).transpose();
    const Eigen::Vector2d b = hull.row((i + 1) % m).transpose();
    const Eigen::Vector2d normal(b.y() - a.y(), a.x() - b.x());
    const double h = normal.dot(a);
    const double s = normal.dot(e);
    if (s > 0) {
      hi = std::min(hi, h / s);
    } else if (s < 0) {
      lo = std::max(lo, h / s);
    } else if (h < 0) {
      lo = 1.0;
      hi = 0.0;
    }
  }
  out.section_length = std::max(0.0, hi - lo);
  return out;
}

}  // namespace sympcap
