#pragma once

// Convex bodies with the origin in their interior, and the convex-geometry
// primitives used throughout the library: gauge and support functions,
// polarity, hyperplane sections, 2D shadows and difference bodies.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sympcap/symplin.hpp"

namespace sympcap {

class Body;

/// {x : <a_i, x> <= 1}; rows of `rows` are the a_i.
struct HPolytope {
  Mat rows;
};

/// conv(vertices); each row is a point.
struct VPolytope {
  Mat vertices;
};

/// {x : x^T Q x <= 1} with Q positive definite.
struct Ellipsoid {
  Mat shape;
};

/// A(base).
struct LinearImage {
  std::shared_ptr<const Body> base;
  Mat map;
  Mat inverse;
};

/// left x right, with `left` living on the q-coordinates and `right` on the
/// p-coordinates.
struct LagrangianProduct {
  std::shared_ptr<const Body> left;
  std::shared_ptr<const Body> right;
};

class Body {
 public:
  using Rep = std::variant<HPolytope, VPolytope, Ellipsoid, LinearImage, LagrangianProduct>;

  /// Rows are used as given (offsets already normalized to 1).
  static Body hpolytope(Mat rows);
  /// {x : A x <= b}; requires b > 0 and rescales rows to unit offsets.
  static Body hpolytope(const Mat& a, const Vec& b);
  static Body vpolytope(Mat vertices);
  static Body ellipsoid(Mat shape);
  static Body linear_image(const Body& base, Mat map);
  static Body lagrangian_product(const Body& left, const Body& right);

  /// [-half_width, half_width]^dim as an H-polytope.
  static Body cube(int dim, double half_width = 1.0);
  /// conv{+-radius e_i} as a V-polytope.
  static Body cross_polytope(int dim, double radius = 1.0);
  /// Euclidean ball of the given radius in R^dim.
  static Body ball(int dim, double radius = 1.0);
  /// {sum_i (q_i^2 + p_i^2) / r_i^2 <= 1} in R^{2n}, n = radii.size().
  static Body ellipsoid_radii(std::span<const double> radii);

  int dim() const { return dim_; }
  const Rep& rep() const { return rep_; }
  bool origin_interior() const { return origin_interior_; }

  bool is_polytope() const;
  bool is_ellipsoid() const;

 private:
  Body(Rep rep, int dim, bool origin_interior);

  Rep rep_;
  int dim_;
  bool origin_interior_;
};

// --- evaluation -----------------------------------------------------------

double gauge(const Body& k, const Vec& x);
double support(const Body& k, const Vec& u);
/// A point of K attaining support(K, u).
Vec support_point(const Body& k, const Vec& u);

Body polar(const Body& k);
/// A point of K° attaining support(K°, y) = g_K(y); a subgradient of g_K at y.
/// Works for every representation, including products with smooth factors.
Vec polar_support_point(const Body& k, const Vec& y);
/// Support of the section K ∩ {v}^⊥ in direction w.
double section_support(const Body& k, const Vec& v, const Vec& w);

/// Exact check of K = -K.
bool is_symmetric(const Body& k, double tol = 1e-9);

Body scaled(const Body& k, double factor);
/// K - t. Requires t interior to K.
Body translated(const Body& k, const Vec& t);

/// Collapses linear images of H-, V-polytopes and ellipsoids into the plain
/// representation; other bodies are returned unchanged.
Body flatten(const Body& k);

// --- polytopes -------------------------------------------------------------

struct EnumerationLimits {
  int max_dim = 12;
  int max_rows = 64;
};

/// Double-description vertex enumeration of a bounded H-polytope.
VPolytope vertex_enumerate(const HPolytope& h, const EnumerationLimits& limits = {});

/// Vertices (as rows) of a polytopal body, enumerating where needed.
/// nullopt for bodies that are not polytopes.
std::optional<Mat> polytope_vertices(const Body& k, const EnumerationLimits& limits = {});

/// Facet rows of a polytopal body. nullopt for non-polytopes.
std::optional<Mat> polytope_facets(const Body& k, const EnumerationLimits& limits = {});

/// Removes points that lie in the convex hull of the others.
Mat extreme_points(const Mat& points, double tol = 1e-9);

/// K + (-K).
Body difference_body(const Body& k, const EnumerationLimits& limits = {});

// --- shadows ---------------------------------------------------------------

struct ShadowOptions {
  EnumerationLimits limits;
  /// Boundary samples used for bodies without an exact shadow formula.
  int smooth_samples = 4096;
  std::uint64_t seed = 0x5eed;
};

/// Area of the orthogonal projection of S(K) onto the (q_1, p_1)-plane.
double shadow_area(const Body& k, const SymplecticMap& s, const ShadowOptions& options = {});

/// Precomputes what shadow_area needs so repeated evaluations under many maps
/// stay cheap.
class ShadowEvaluator {
 public:
  explicit ShadowEvaluator(const Body& k, const ShadowOptions& options = {});
  double operator()(const Mat& linear) const;
  int dim() const { return dim_; }

 private:
  int dim_;
  std::optional<Mat> points_;      // polytope vertices or boundary samples
  std::optional<Mat> covariance_;  // Q^{-1} for ellipsoids
};

// --- planar geometry ---------------------------------------------------------

/// Counter-clockwise convex hull (Andrew's monotone chain), collinear points
/// dropped. Input rows are 2D points.
Mat convex_hull_2d(const Mat& points);
/// Shoelace area of a polygon given by its vertices in order.
double polygon_area(const Mat& polygon);

struct RogersShephardPlanar {
  double area;
  double projection_length;  // length of the projection onto span{direction}
  double section_length;     // length of P ∩ direction^⊥
};

/// Area <= projection_length * section_length <= 2 * area for symmetric P.
RogersShephardPlanar rs_planar_check(const Mat& polygon, const Eigen::Vector2d& direction);

}  // namespace sympcap
