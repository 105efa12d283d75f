#include <cmath>
#include <limits>
#include <string>

#include "detail.hpp"
#include "sympcap/bodies.hpp"
#include "sympcap/error.hpp"
#include "sympcap/lp.hpp"

namespace sympcap {

namespace detail {

bool origin_in_hull_interior(const Mat& points) {
  const Eigen::Index k = points.rows();
  const Eigen::Index d = points.cols();
  if (k <= d) return false;
  Eigen::FullPivLU<Mat> lu(points);
  if (lu.rank() < d) return false;

  // max t  s.t.  sum l_i p_i = 0, sum l_i = 1, l_i >= t.
  lp::Program p;
  p.objective = Vec::Zero(k + 1);
  p.objective(k) = 1.0;
  p.a_eq = Mat::Zero(d + 1, k + 1);
  p.a_eq.topLeftCorner(d, k) = points.transpose();
  p.a_eq.block(d, 0, 1, k).setOnes();
  p.b_eq = Vec::Zero(d + 1);
  p.b_eq(d) = 1.0;
  p.a_ub = Mat::Zero(k, k + 1);
  p.a_ub.leftCols(k) = -Mat::Identity(k, k);
  p.a_ub.col(k).setOnes();
  p.b_ub = Vec::Zero(k);
  p.free.assign(k + 1, false);
  p.free[k] = true;
  const auto r = lp::solve(p);
  return r.status == lp::Status::kOptimal && r.value > 1e-12;
}

double hull_gauge(const Mat& points, const Vec& x) {
  if (x.isZero(0.0)) return 0.0;
  const Eigen::Index k = points.rows();
  lp::Program p;
  p.objective = -Vec::Ones(k);
  p.a_eq = points.transpose();
  p.b_eq = x;
  p.free.assign(k, false);
  const auto r = lp::solve(p);
  if (r.status != lp::Status::kOptimal) return std::numeric_limits<double>::infinity();
  return -r.value;
}

bool in_hull(const Mat& points, const Vec& x, double tol) {
  const Eigen::Index k = points.rows();
  const Eigen::Index d = points.cols();
  lp::Program p;
  p.objective = Vec::Zero(k);
  p.a_eq = Mat::Zero(d + 1, k);
  p.a_eq.topRows(d) = points.transpose();
  p.a_eq.row(d).setOnes();
  p.b_eq.resize(d + 1);
  p.b_eq << x, 1.0;
  p.free.assign(k, false);
  return lp::solve(p, tol).status == lp::Status::kOptimal;
}

}  // namespace detail

namespace {

void require_finite(const Mat& m, const char* what) {
  if (m.size() == 0 || !m.allFinite()) {
    fail(ErrorCode::kRepresentation, std::string(what) + ": empty or non-finite data");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Body::Body(Rep rep, int dim, bool origin_interior)
    : rep_(std::move(rep)), dim_(dim), origin_interior_(origin_interior) {}

Body Body::hpolytope(Mat rows) {
  require_finite(rows, "hpolytope");
  // Bounded iff the rows positively span the space.
  if (!detail::origin_in_hull_interior(rows)) {
    fail(ErrorCode::kRepresentation, "hpolytope: constraints do not bound a body");
  }
  const int dim = static_cast<int>(rows.cols());
  return Body(HPolytope{std::move(rows)}, dim, true);
}

Body Body::hpolytope(const Mat& a, const Vec& b) {
  if (b.size() != a.rows()) fail(ErrorCode::kDimension, "hpolytope: offsets do not match rows");
  if (!(b.minCoeff() > 0.0)) fail(ErrorCode::kOriginExterior, "hpolytope: offsets must be positive");
  Mat rows = b.cwiseInverse().asDiagonal() * a;
  return hpolytope(std::move(rows));
}

Body Body::vpolytope(Mat vertices) {
  require_finite(vertices, "vpolytope");
  const bool interior = detail::origin_in_hull_interior(vertices);
  const int dim = static_cast<int>(vertices.cols());
  return Body(VPolytope{std::move(vertices)}, dim, interior);
}

Body Body::ellipsoid(Mat shape) {
  require_finite(shape, "ellipsoid");
  if (shape.rows() != shape.cols()) fail(ErrorCode::kDimension, "ellipsoid: shape must be square");
  if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > 1e-12 * shape.cwiseAbs().maxCoeff()) {
    fail(ErrorCode::kRepresentation, "ellipsoid: shape must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(shape, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    fail(ErrorCode::kRepresentation, "ellipsoid: shape must be positive definite");
  }
  Mat sym = 0.5 * (shape + shape.transpose());
  const int dim = static_cast<int>(sym.rows());
  return Body(Ellipsoid{std::move(sym)}, dim, true);
}

Body Body::linear_image(const Body& base, Mat map) {
  require_finite(map, "linear_image");
  if (map.rows() != base.dim() || map.cols() != base.dim()) {
    fail(ErrorCode::kDimension, "linear_image: map does not match base dimension");
  }
  Eigen::FullPivLU<Mat> lu(map);
  if (!lu.isInvertible()) fail(ErrorCode::kRepresentation, "linear_image: map is singular");
  Mat inverse = lu.inverse();
  return Body(LinearImage{std::make_shared<const Body>(base), std::move(map), std::move(inverse)}, base.dim(),
              base.origin_interior());
}

Body Body::lagrangian_product(const Body& left, const Body& right) {
  return Body(LagrangianProduct{std::make_shared<const Body>(left), std::make_shared<const Body>(right)},
              left.dim() + right.dim(), left.origin_interior() && right.origin_interior());
}

Body Body::cube(int dim, double half_width) {
  if (dim < 1 || !(half_width > 0.0)) fail(ErrorCode::kDomain, "cube: bad dimension or width");
  Mat rows(2 * dim, dim);
  rows << Mat::Identity(dim, dim) / half_width, -Mat::Identity(dim, dim) / half_width;
  return Body(HPolytope{std::move(rows)}, dim, true);
}

Body Body::cross_polytope(int dim, double radius) {
  if (dim < 1 || !(radius > 0.0)) fail(ErrorCode::kDomain, "cross_polytope: bad dimension or radius");
  Mat v(2 * dim, dim);
  v << radius * Mat::Identity(dim, dim), -radius * Mat::Identity(dim, dim);
  return Body(VPolytope{std::move(v)}, dim, true);
}

Body Body::ball(int dim, double radius) {
  if (dim < 1 || !(radius > 0.0)) fail(ErrorCode::kDomain, "ball: bad dimension or radius");
  return Body(Ellipsoid{Mat::Identity(dim, dim) / (radius * radius)}, dim, true);
}

Body Body::ellipsoid_radii(std::span<const double> radii) {
  const int n = static_cast<int>(radii.size());
  if (n < 1) fail(ErrorCode::kDomain, "ellipsoid_radii: need at least one radius");
  Vec diag(2 * n);
  for (int i = 0; i < n; ++i) {
    if (!(radii[i] > 0.0)) fail(ErrorCode::kDomain, "ellipsoid_radii: radii must be positive");
    diag(i) = diag(n + i) = 1.0 / (radii[i] * radii[i]);
  }
  return Body(Ellipsoid{diag.asDiagonal()}, 2 * n, true);
}

bool Body::is_polytope() const {
  return std::visit(Overloaded{
                        [](const HPolytope&) { return true; },
                        [](const VPolytope&) { return true; },
                        [](const Ellipsoid&) { return false; },
                        [](const LinearImage& li) { return li.base->is_polytope(); },
                        [](const LagrangianProduct& p) { return p.left->is_polytope() && p.right->is_polytope(); },
                    },
                    rep_);
}

bool Body::is_ellipsoid() const {
  if (std::holds_alternative<Ellipsoid>(rep_)) return true;
  if (const auto* li = std::get_if<LinearImage>(&rep_)) return li->base->is_ellipsoid();
  return false;
}

namespace {

void check_dim(const Body& k, const Vec& x) {
  if (x.size() != k.dim()) fail(ErrorCode::kDimension, "vector does not match body dimension");
}

Vec h_support_point(const Mat& rows, const Vec& u, double* value) {
  lp::Program p;
  p.objective = u;
  p.a_ub = rows;
  p.b_ub = Vec::Ones(rows.rows());
  const auto r = lp::solve(p);
  if (r.status != lp::Status::kOptimal) fail(ErrorCode::kInternal, "support LP did not reach an optimum");
  if (value) *value = r.value;
  return r.x;
}

}  // namespace

double gauge(const Body& k, const Vec& x) {
  check_dim(k, x);
  return std::visit(
      Overloaded{
          [&](const HPolytope& h) { return std::max(0.0, (h.rows * x).maxCoeff()); },
          [&](const VPolytope& v) {
            if (!k.origin_interior()) fail(ErrorCode::kRepresentation, "gauge: origin not interior");
            return detail::hull_gauge(v.vertices, x);
          },
          [&](const Ellipsoid& e) { return std::sqrt(std::max(0.0, x.dot(e.shape * x))); },
          [&](const LinearImage& li) { return gauge(*li.base, li.inverse * x); },
          [&](const LagrangianProduct& p) {
            const int a = p.left->dim();
            return std::max(gauge(*p.left, x.head(a)), gauge(*p.right, x.tail(p.right->dim())));
          },
      },
      k.rep());
}

double support(const Body& k, const Vec& u) {
  check_dim(k, u);
  return std::visit(Overloaded{
                        [&](const HPolytope& h) {
                          double value = 0.0;
                          h_support_point(h.rows, u, &value);
                          return value;
                        },
                        [&](const VPolytope& v) { return (v.vertices * u).maxCoeff(); },
                        [&](const Ellipsoid& e) {
                          return std::sqrt(std::max(0.0, u.dot(e.shape.llt().solve(u))));
                        },
                        [&](const LinearImage& li) { return support(*li.base, li.map.transpose() * u); },
                        [&](const LagrangianProduct& p) {
                          const int a = p.left->dim();
                          return support(*p.left, u.head(a)) + support(*p.right, u.tail(p.right->dim()));
                        },
                    },
                    k.rep());
}

Vec support_point(const Body& k, const Vec& u) {
  check_dim(k, u);
  return std::visit(Overloaded{
                        [&](const HPolytope& h) -> Vec { return h_support_point(h.rows, u, nullptr); },
                        [&](const VPolytope& v) -> Vec {
                          Eigen::Index best = 0;
                          (v.vertices * u).maxCoeff(&best);
                          return v.vertices.row(best).transpose();
                        },
                        [&](const Ellipsoid& e) -> Vec {
                          Vec y = e.shape.llt().solve(u);
                          const double h = std::sqrt(std::max(0.0, u.dot(y)));
                          return h > 0.0 ? Vec(y / h) : Vec(Vec::Zero(u.size()));
                        },
                        [&](const LinearImage& li) -> Vec {
                          return li.map * support_point(*li.base, li.map.transpose() * u);
                        },
                        [&](const LagrangianProduct& p) -> Vec {
                          const int a = p.left->dim();
                          const int b = p.right->dim();
                          Vec out(a + b);
                          out << support_point(*p.left, u.head(a)), support_point(*p.right, u.tail(b));
                          return out;
                        },
                    },
                    k.rep());
}

Body polar(const Body& k) {
  if (!k.origin_interior()) fail(ErrorCode::kRepresentation, "polar: origin not interior");
  return std::visit(Overloaded{
                        [](const HPolytope& h) { return Body::vpolytope(h.rows); },
                        [](const VPolytope& v) { return Body::hpolytope(v.vertices); },
                        [](const Ellipsoid& e) { return Body::ellipsoid(e.shape.inverse()); },
                        [](const LinearImage& li) {
                          return Body::linear_image(polar(*li.base), li.inverse.transpose());
                        },
                        [&](const LagrangianProduct&) {
                          // (L x R)° = conv(L° x {0} ∪ {0} x R°).
                          auto facets = polytope_facets(k);
                          if (!facets) {
                            fail(ErrorCode::kRepresentation, "polar: product with a smooth factor");
                          }
                          return Body::vpolytope(*facets);
                        },
                    },
                    k.rep());
}

Vec polar_support_point(const Body& k, const Vec& y) {
  check_dim(k, y);
  if (!k.origin_interior()) fail(ErrorCode::kRepresentation, "polar_support_point: origin not interior");
  return std::visit(
      Overloaded{
          [&](const HPolytope& h) -> Vec {
            Eigen::Index best = 0;
            (h.rows * y).maxCoeff(&best);
            return h.rows.row(best).transpose();
          },
          [&](const VPolytope& v) -> Vec { return h_support_point(v.vertices, y, nullptr); },
          [&](const Ellipsoid& e) -> Vec {
            const Vec qy = e.shape * y;
            const double g = std::sqrt(std::max(0.0, y.dot(qy)));
            return g > 0.0 ? Vec(qy / g) : Vec(Vec::Zero(y.size()));
          },
          [&](const LinearImage& li) -> Vec {
            return li.inverse.transpose() * polar_support_point(*li.base, li.inverse * y);
          },
          [&](const LagrangianProduct& p) -> Vec {
            const int a = p.left->dim();
            const int b = p.right->dim();
            Vec out = Vec::Zero(a + b);
            if (gauge(*p.left, y.head(a)) >= gauge(*p.right, y.tail(b))) {
              out.head(a) = polar_support_point(*p.left, y.head(a));
            } else {
              out.tail(b) = polar_support_point(*p.right, y.tail(b));
            }
            return out;
          },
      },
      k.rep());
}

double section_support(const Body& k, const Vec& v, const Vec& w) {
  check_dim(k, v);
  check_dim(k, w);
  if (v.isZero(0.0)) fail(ErrorCode::kDomain, "section_support: normal must be nonzero");

  auto h_section = [&](const Mat& rows, const Vec& normal, const Vec& dir) {
    lp::Program p;
    p.objective = dir;
    p.a_ub = rows;
    p.b_ub = Vec::Ones(rows.rows());
    p.a_eq = normal.transpose();
    p.b_eq = Vec::Zero(1);
    const auto r = lp::solve(p);
    if (r.status != lp::Status::kOptimal) fail(ErrorCode::kInternal, "section LP failed");
    return std::max(0.0, r.value);
  };

  return std::visit(
      Overloaded{
          [&](const HPolytope& h) { return h_section(h.rows, v, w); },
          [&](const VPolytope& vp) {
            const Eigen::Index m = vp.vertices.rows();
            lp::Program p;
            p.objective = vp.vertices * w;
            p.a_eq = Mat(2, m);
            p.a_eq.row(0).setOnes();
            p.a_eq.row(1) = (vp.vertices * v).transpose();
            p.b_eq = Vec::Zero(2);
            p.b_eq(0) = 1.0;
            p.free.assign(m, false);
            const auto r = lp::solve(p);
            if (r.status != lp::Status::kOptimal) fail(ErrorCode::kInternal, "section LP failed");
            return std::max(0.0, r.value);
          },
          [&](const Ellipsoid& e) {
            const auto llt = e.shape.llt();
            const Vec pv = llt.solve(v);
            const Vec pw = llt.solve(w);
            const double vpv = v.dot(pv);
            const double val = w.dot(pw) - (w.dot(pv) * w.dot(pv)) / vpv;
            return std::sqrt(std::max(0.0, val));
          },
          [&](const LinearImage& li) {
            return section_support(*li.base, li.map.transpose() * v, li.map.transpose() * w);
          },
          [&](const LagrangianProduct&) {
            auto facets = polytope_facets(k);
            if (!facets) fail(ErrorCode::kRepresentation, "section_support: product with a smooth factor");
            return h_section(*facets, v, w);
          },
      },
      k.rep());
}

bool is_symmetric(const Body& k, double tol) {
  return std::visit(Overloaded{
                        [&](const HPolytope& h) {
                          for (Eigen::Index i = 0; i < h.rows.rows(); ++i) {
                            if (detail::hull_gauge(h.rows, -h.rows.row(i).transpose()) > 1.0 + tol) return false;
                          }
                          return true;
                        },
                        [&](const VPolytope& v) {
                          if (!k.origin_interior()) return false;
                          for (Eigen::Index i = 0; i < v.vertices.rows(); ++i) {
                            if (detail::hull_gauge(v.vertices, -v.vertices.row(i).transpose()) > 1.0 + tol) {
                              return false;
                            }
                          }
                          return true;
                        },
                        [](const Ellipsoid&) { return true; },
                        [&](const LinearImage& li) { return is_symmetric(*li.base, tol); },
                        [&](const LagrangianProduct& p) {
                          return is_symmetric(*p.left, tol) && is_symmetric(*p.right, tol);
                        },
                    },
                    k.rep());
}

Body scaled(const Body& k, double factor) {
  if (!(factor > 0.0)) fail(ErrorCode::kDomain, "scaled: factor must be positive");
  return std::visit(Overloaded{
                        [&](const HPolytope& h) { return Body::hpolytope(h.rows / factor); },
                        [&](const VPolytope& v) { return Body::vpolytope(v.vertices * factor); },
                        [&](const Ellipsoid& e) { return Body::ellipsoid(e.shape / (factor * factor)); },
                        [&](const LinearImage& li) { return Body::linear_image(*li.base, li.map * factor); },
                        [&](const LagrangianProduct& p) {
                          return Body::lagrangian_product(scaled(*p.left, factor), scaled(*p.right, factor));
                        },
                    },
                    k.rep());
}

Body translated(const Body& k, const Vec& t) {
  check_dim(k, t);
  return std::visit(
      Overloaded{
          [&](const HPolytope& h) {
            const Vec slack = Vec::Ones(h.rows.rows()) - h.rows * t;
            if (!(slack.minCoeff() > 0.0)) fail(ErrorCode::kDomain, "translated: point not interior");
            return Body::hpolytope(slack.cwiseInverse().asDiagonal() * h.rows);
          },
          [&](const VPolytope& v) {
            Body out = Body::vpolytope(v.vertices.rowwise() - t.transpose());
            if (!out.origin_interior()) fail(ErrorCode::kDomain, "translated: point not interior");
            return out;
          },
          [&](const Ellipsoid&) -> Body {
            fail(ErrorCode::kRepresentation, "translated: ellipsoids are centred at the origin");
          },
          [&](const LinearImage& li) { return Body::linear_image(translated(*li.base, li.inverse * t), li.map); },
          [&](const LagrangianProduct& p) {
            const int a = p.left->dim();
            return Body::lagrangian_product(translated(*p.left, t.head(a)),
                                            translated(*p.right, t.tail(p.right->dim())));
          },
      },
      k.rep());
}

Body flatten(const Body& k) {
  const auto* li = std::get_if<LinearImage>(&k.rep());
  if (!li) return k;
  const Body base = flatten(*li->base);
  return std::visit(Overloaded{
                        [&](const HPolytope& h) { return Body::hpolytope(h.rows * li->inverse); },
                        [&](const VPolytope& v) { return Body::vpolytope(v.vertices * li->map.transpose()); },
                        [&](const Ellipsoid& e) {
                          Mat q = li->inverse.transpose() * e.shape * li->inverse;
                          return Body::ellipsoid(0.5 * (q + q.transpose()));
                        },
                        [&](const LinearImage& inner) {
                          return Body::linear_image(*inner.base, li->map * inner.map);
                        },
                        [&](const LagrangianProduct&) {
                          if (auto facets = polytope_facets(base)) {
                            return Body::hpolytope(*facets * li->inverse);
                          }
                          return Body::linear_image(base, li->map);
                        },
                    },
                    base.rep());
}

}  // namespace sympcap
