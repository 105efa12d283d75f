#include "sympcap/normj.hpp"

#include <cmath>
#include <random>

#include "sympcap/error.hpp"

namespace sympcap {

std::string_view to_string(NormJMethod method) {
  switch (method) {
    case NormJMethod::kExactVertex:
      return "exact-vertex";
    case NormJMethod::kClosedForm:
      return "closed-form";
    case NormJMethod::kMultistartAscent:
      return "multistart-ascent";
  }
  return "unknown";
}

NormJResult norm_J_vertex_pairs(const Mat& polar_vertices) {
  const int n = half_dim(polar_vertices.cols());
  // gram(i, j) = <J a_i, a_j>.
  const Mat gram = polar_vertices * complex_structure(n).transpose() * polar_vertices.transpose();
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  NormJResult r;
  r.value = gram.maxCoeff(&i, &j);
  r.witness_v = polar_vertices.row(i).transpose();
  r.witness_u = polar_vertices.row(j).transpose();
  r.method = NormJMethod::kExactVertex;
  r.certified_lower = apply_J(r.witness_v).dot(r.witness_u);
  return r;
}

namespace {

NormJResult ellipsoid_closed_form(const Mat& q) {
  const int n = half_dim(q.rows());
  // K° = M^T B with Q = M^T M, so the sup is sigma_max(M J M^T).
  const Mat m = q.llt().matrixU();
  Eigen::JacobiSVD<Mat> svd(m * complex_structure(n) * m.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  NormJResult r;
  r.value = svd.singularValues()(0);
  r.witness_v = m.transpose() * svd.matrixV().col(0);
  r.witness_u = m.transpose() * svd.matrixU().col(0);
  r.method = NormJMethod::kClosedForm;
  r.certified_lower = apply_J(r.witness_v).dot(r.witness_u);
  return r;
}

// Unrestricted sup over K° x K°, no symmetry requirement.
NormJResult norm_J_any(const Body& k, const NormJOptions& options) {
  half_dim(k.dim());
  if (!k.origin_interior()) fail(ErrorCode::kRepresentation, "norm_J: origin not interior");
  const Body flat = flatten(k);
  if (const auto* e = std::get_if<Ellipsoid>(&flat.rep())) return ellipsoid_closed_form(e->shape);
  if (flat.is_polytope()) {
    auto facets = polytope_facets(flat, options.limits);
    return norm_J_vertex_pairs(*facets);
  }
  return norm_J_ascent(k, options.ascent);
}

}  // namespace

NormJResult norm_J_ascent(const Body& k, const AscentOptions& options) {
  half_dim(k.dim());
  if (!k.origin_interior()) fail(ErrorCode::kRepresentation, "norm_J: origin not interior");
  if (options.starts < 1) fail(ErrorCode::kConfig, "norm_J: need at least one start");
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;

  NormJResult best;
  best.value = -1.0;
  for (int s = 0; s < options.starts; ++s) {
    Vec v(k.dim());
    for (auto& c : v) c = normal(rng);
    v /= support(k, v);  // onto the boundary of K°
    Vec u = polar_support_point(k, apply_J(v));
    double value = apply_J(v).dot(u);
    for (int it = 0; it < options.max_iterations; ++it) {
      v = polar_support_point(k, -apply_J(u));
      u = polar_support_point(k, apply_J(v));
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

NormJResult norm_J(const Body& k, const NormJOptions& options) {
  if (!k.origin_interior()) fail(ErrorCode::kRepresentation, "norm_J: origin not interior");
  if (!is_symmetric(k)) fail(ErrorCode::kSymmetry, "norm_J: body is not centrally symmetric");
  return norm_J_any(k, options);
}

double ehz_lower_bound(const Body& k, const NormJOptions& options) { return 1.0 / norm_J(k, options).value; }

double cyl_upper_bound(const Body& k, const NormJOptions& options) { return 4.0 / norm_J(k, options).value; }

NonsymBounds nonsym_bounds(const Body& k, std::span<const Vec> translations, const NormJOptions& options) {
  if (translations.empty()) fail(ErrorCode::kDomain, "nonsym_bounds: no candidate translations");
  if (!k.is_polytope()) fail(ErrorCode::kRepresentation, "nonsym_bounds: polytopes only");
  NonsymBounds out;
  out.lower = -1.0;
  for (const Vec& t : translations) {
    // translated() rejects points outside the interior with a domain error.
    const Body shifted = translated(k, t);
    const double lower = 1.0 / norm_J_any(shifted, options).value;
    if (lower > out.lower) {
      out.lower = lower;
      out.best_translation = t;
    }
  }
  out.upper = 1.0 / norm_J_any(difference_body(k, options.limits), options).value;
  return out;
}

std::vector<Vec> default_translations(const Body& k, const EnumerationLimits& limits) {
  auto verts = polytope_vertices(k, limits);
  if (!verts) fail(ErrorCode::kRepresentation, "default_translations: polytopes only");
  const Vec c = verts->colwise().mean().transpose();
  std::vector<Vec> out{c};
  const Body centred = translated(k, c);
  for (int i = 0; i < k.dim(); ++i) {
    const Vec e = Vec::Unit(k.dim(), i);
    out.push_back(c + (0.25 / gauge(centred, e)) * e);
  }
  return out;
}

}  // namespace sympcap
