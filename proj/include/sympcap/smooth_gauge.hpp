#pragma once

// C^2 gauge functions that drive the characteristic flow: exact quadratic
// gauges of ellipsoids and the l^{2m} power-sum surrogate of a symmetric
// polytope, g_s(x) = (sum_i <a_i, x>^{2m})^{1/2m}. The surrogate body
// {g_s <= 1} lies inside the polytope {max_i |<a_i, x>| <= 1} and contains
// its shrinking by p^{-1/2m}, p the number of row pairs.

#include <string>

#include "sympcap/bodies.hpp"
#include "sympcap/normj.hpp"

namespace sympcap {

class SmoothGauge {
 public:
  static SmoothGauge quadratic(Mat shape);
  /// Rows a_i; rows equal up to sign are merged.
  static SmoothGauge power_sum(Mat rows, int m);
  /// Ellipsoids exactly, symmetric polytopes through the power-sum surrogate.
  static SmoothGauge from_body(const Body& k, int m = 8);

  int dim() const { return dim_; }
  bool exact() const { return rows_.size() == 0; }
  int power() const { return m_; }
  /// Number of row pairs of a power-sum gauge (0 for quadratics).
  int pairs() const { return static_cast<int>(rows_.rows()); }
  /// "exact" or "power-sum m=<m>".
  std::string tag() const;
  /// Largest s with g_K <= s * g_s for the polytope being smoothed.
  double inflation() const;

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;
  /// Gauge of the polar body. Power sums only with a square invertible row set.
  double polar_value(const Vec& y) const;

 private:
  SmoothGauge(int dim, Mat shape, Mat rows, int m);

  int dim_;
  Mat shape_;  // quadratic case
  Mat rows_;   // power-sum case
  int m_ = 1;
};

/// Gradient of g_K for bodies that are smooth as represented (ellipsoids and
/// their linear images). Throws kSmoothness otherwise.
Vec gradient_gauge(const Body& k, const Vec& x);

/// Alternating ascent of <Jv, u> over the polar of {g <= 1}, using that the
/// support point of the polar body in direction y is grad g(y).
NormJResult norm_J_smooth(const SmoothGauge& g, const AscentOptions& options = {});

}  // namespace sympcap
