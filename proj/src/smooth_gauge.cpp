#include "sympcap/smooth_gauge.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "sympcap/error.hpp"

namespace sympcap {

SmoothGauge::SmoothGauge(int dim, Mat shape, Mat rows, int m)
    : dim_(dim), shape_(std::move(shape)), rows_(std::move(rows)), m_(m) {}

SmoothGauge SmoothGauge::quadratic(Mat shape) {
  // Validates positive definiteness.
  const Body e = Body::ellipsoid(shape);
  return SmoothGauge(e.dim(), std::get<Ellipsoid>(e.rep()).shape, Mat(), 1);
}

SmoothGauge SmoothGauge::power_sum(Mat rows, int m) {
  if (m < 1) fail(ErrorCode::kConfig, "power_sum: exponent must be positive");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    bool dup = false;
    for (Eigen::Index j : keep) {
      const double scale = std::max(rows.row(i).norm(), rows.row(j).norm());
      if ((rows.row(i) - rows.row(j)).norm() <= 1e-12 * scale || (rows.row(i) + rows.row(j)).norm() <= 1e-12 * scale) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(i);
  }
  Mat unique(static_cast<Eigen::Index>(keep.size()), rows.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) unique.row(static_cast<Eigen::Index>(r)) = rows.row(keep[r]);
  if (Eigen::FullPivLU<Mat>(unique).rank() < unique.cols()) {
    fail(ErrorCode::kRepresentation, "power_sum: rows do not span the space");
  }
  const int dim = static_cast<int>(unique.cols());
  return SmoothGauge(dim, Mat(), std::move(unique), m);
}

SmoothGauge SmoothGauge::from_body(const Body& k, int m) {
  const Body flat = flatten(k);
  if (const auto* e = std::get_if<Ellipsoid>(&flat.rep())) return quadratic(e->shape);
  if (!flat.is_polytope()) fail(ErrorCode::kSmoothness, "no smooth surrogate for this body");
  if (!is_symmetric(flat)) fail(ErrorCode::kSymmetry, "power-sum smoothing needs a symmetric polytope");
  return power_sum(*polytope_facets(flat), m);
}

std::string SmoothGauge::tag() const { return exact() ? "exact" : "power-sum m=" + std::to_string(m_); }

double SmoothGauge::inflation() const {
  return exact() ? 1.0 : std::pow(static_cast<double>(rows_.rows()), 1.0 / (2.0 * m_));
}

double SmoothGauge::value(const Vec& x) const {
  if (x.size() != dim_) fail(ErrorCode::kDimension, "smooth gauge: dimension mismatch");
  if (exact()) return std::sqrt(std::max(0.0, x.dot(shape_ * x)));
  const Vec s = rows_ * x;
  const double top = s.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0.0;
  return top * std::pow((s / top).array().pow(2 * m_).sum(), 1.0 / (2.0 * m_));
}

Vec SmoothGauge::gradient(const Vec& x) const {
  const double g = value(x);
  if (!(g > 0.0)) fail(ErrorCode::kSmoothness, "gauge gradient undefined at the origin");
  if (exact()) return shape_ * x / g;
  const Vec r = rows_ * x / g;
  return rows_.transpose() * r.array().pow(2 * m_ - 1).matrix();
}

Mat SmoothGauge::hessian(const Vec& x) const {
  const double g = value(x);
  if (!(g > 0.0)) fail(ErrorCode::kSmoothness, "gauge hessian undefined at the origin");
  const Vec grad = gradient(x);
  if (exact()) return (shape_ - grad * grad.transpose()) / g;
  const Vec w = (rows_ * x / g).array().pow(2 * m_ - 2).matrix();
  return (2.0 * m_ - 1.0) / g * (rows_.transpose() * w.asDiagonal() * rows_ - grad * grad.transpose());
}

double SmoothGauge::polar_value(const Vec& y) const {
  if (y.size() != dim_) fail(ErrorCode::kDimension, "smooth gauge: dimension mismatch");
  if (exact()) return std::sqrt(std::max(0.0, y.dot(shape_.llt().solve(y))));
  if (rows_.rows() != rows_.cols()) {
    fail(ErrorCode::kRepresentation, "polar of a power-sum gauge needs a square row set");
  }
  // {||A x||_p <= 1}° = A^T B_{p*}.
  const double p_star = 2.0 * m_ / (2.0 * m_ - 1.0);
  const Vec z = rows_.transpose().fullPivLu().solve(y);
  const double top = z.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0.0;
  return top * std::pow((z.cwiseAbs() / top).array().pow(p_star).sum(), 1.0 / p_star);
}

Vec gradient_gauge(const Body& k, const Vec& x) {
  if (!k.is_ellipsoid()) fail(ErrorCode::kSmoothness, "gradient_gauge: body is not smooth; smooth it first");
  const Body flat = flatten(k);
  return SmoothGauge::quadratic(std::get<Ellipsoid>(flat.rep()).shape).gradient(x);
}

NormJResult norm_J_smooth(const SmoothGauge& g, const AscentOptions& options) {
  half_dim(g.dim());
  if (options.starts < 1) fail(ErrorCode::kConfig, "norm_J_smooth: need at least one start");
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  NormJResult best;
  best.value = -1.0;
  for (int s = 0; s < options.starts; ++s) {
    Vec x(g.dim());
    for (auto& c : x) c = normal(rng);
    Vec v = g.gradient(x);  // on the boundary of the polar body
    Vec u = g.gradient(apply_J(v));
    double value = apply_J(v).dot(u);
    for (int it = 0; it < options.max_iterations; ++it) {
      v = g.gradient(-apply_J(u));
      u = g.gradient(apply_J(v));
      const double next = apply_J(v).dot(u);
      const bool done = next - value <= options.rel_tol * std::abs(next);
      value = std::max(value, next);
      if (done) break;
    }
    if (value > best.value) {
      best.value = value;
      best.witness_v = v;
      best.witness_u = u;
    }
  }
  best.method = NormJMethod::kMultistartAscent;
  best.certified_lower = apply_J(best.witness_v).dot(best.witness_u);
  best.value = best.certified_lower;
  return best;
}

}  // namespace sympcap
