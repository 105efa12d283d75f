#pragma once

#include "sympcap/symplin.hpp"

namespace sympcap::detail {

/// True when the origin lies in the interior of conv(rows of points).
bool origin_in_hull_interior(const Mat& points);

/// Minimal r >= 0 with x in r * conv(points); +inf when x is outside the cone.
double hull_gauge(const Mat& points, const Vec& x);

/// True when p is in conv(points) (rows).
bool in_hull(const Mat& points, const Vec& p, double tol);

}  // namespace sympcap::detail
