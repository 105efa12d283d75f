#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "detail.hpp"
#include "sympcap/bodies.hpp"
#include "sympcap/error.hpp"

namespace sympcap {

namespace {

constexpr double kEps = 1e-9;

// Drops rows that coincide (up to relative tolerance) with an earlier row.
Mat unique_rows(const Mat& m, double tol) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    bool dup = false;
    for (Eigen::Index j : keep) {
      const double scale = std::max({1.0, m.row(i).norm(), m.row(j).norm()});
      if ((m.row(i) - m.row(j)).norm() <= tol * scale) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(i);
  }
  Mat out(static_cast<Eigen::Index>(keep.size()), m.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(keep[r]);
  return out;
}

struct Ray {
  Vec dir;
  boost::dynamic_bitset<> tight;
};

// Double description on the homogenized cone {(y0, y) : y0 >= 0, y0 - <a_i, y> >= 0}.
// Every extreme ray with y0 > 0 is a vertex y / y0 of the polytope.
class DoubleDescription {
 public:
  explicit DoubleDescription(Mat cone) : c_(std::move(cone)) {
    for (Eigen::Index i = 0; i < c_.rows(); ++i) c_.row(i).normalize();
  }

  std::vector<Vec> run() {
    const Eigen::Index m = c_.rows();
    const Eigen::Index d = c_.cols();

    Eigen::ColPivHouseholderQR<Mat> qr(c_.transpose());
    if (qr.rank() < d) fail(ErrorCode::kRepresentation, "vertex enumeration: constraints do not bound a body");
    std::vector<Eigen::Index> order;
    std::vector<bool> used(m, false);
    for (Eigen::Index k = 0; k < d; ++k) {
      const Eigen::Index idx = qr.colsPermutation().indices()(k);
      order.push_back(idx);
      used[idx] = true;
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!used[i]) order.push_back(i);
    }

    // Initial simplicial cone: rays are the columns of the inverse of the
    // first d constraint rows.
    Mat base(d, d);
    for (Eigen::Index k = 0; k < d; ++k) base.row(k) = c_.row(order[k]);
    const Mat inv = base.inverse();
    rays_.clear();
    for (Eigen::Index k = 0; k < d; ++k) {
      Ray r{inv.col(k).normalized(), boost::dynamic_bitset<>(m)};
      rays_.push_back(std::move(r));
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      for (auto& r : rays_) {
        if (std::abs(c_.row(order[k]).dot(r.dir)) <= kEps) r.tight.set(order[k]);
      }
    }

    for (std::size_t k = d; k < order.size(); ++k) add_constraint(order[k]);

    std::vector<Vec> out;
    for (const auto& r : rays_) out.push_back(r.dir);
    return out;
  }

 private:
  void add_constraint(Eigen::Index row) {
    const Eigen::Index d = c_.cols();
    std::vector<double> val(rays_.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t i = 0; i < rays_.size(); ++i) {
      val[i] = c_.row(row).dot(rays_[i].dir);
      if (val[i] > kEps) {
        pos.push_back(i);
      } else if (val[i] < -kEps) {
        neg.push_back(i);
      } else {
        zero.push_back(i);
      }
    }
    if (neg.empty()) {
      for (std::size_t i : zero) rays_[i].tight.set(row);
      return;
    }

    std::vector<Ray> next;
    for (std::size_t i : pos) next.push_back(rays_[i]);
    for (std::size_t i : zero) {
      next.push_back(rays_[i]);
      next.back().tight.set(row);
    }
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        const auto common = rays_[p].tight & rays_[q].tight;
        if (static_cast<Eigen::Index>(common.count()) < d - 2) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays_.size() && adjacent; ++r) {
          if (r != p && r != q && common.is_subset_of(rays_[r].tight)) adjacent = false;
        }
        if (!adjacent) continue;
        Vec dir = val[p] * rays_[q].dir - val[q] * rays_[p].dir;
        const double norm = dir.norm();
        if (norm <= kEps) continue;
        dir /= norm;
        Ray fresh{dir, common};
        fresh.tight.set(row);
        next.push_back(std::move(fresh));
      }
    }
    rays_ = std::move(next);
  }

  Mat c_;
  std::vector<Ray> rays_;
};

}  // namespace

VPolytope vertex_enumerate(const HPolytope& h, const EnumerationLimits& limits) {
  const Eigen::Index dim = h.rows.cols();
  if (dim > limits.max_dim || h.rows.rows() > limits.max_rows) {
    fail(ErrorCode::kSize, "vertex enumeration: " + std::to_string(h.rows.rows()) + " rows in dimension " +
                               std::to_string(dim) + " exceed the configured limits");
  }
  const Mat rows = unique_rows(h.rows, 1e-12);
  const Eigen::Index m = rows.rows();

  Mat cone = Mat::Zero(m + 1, dim + 1);
  cone(0, 0) = 1.0;
  cone.bottomRows(m).col(0).setOnes();
  cone.bottomRightCorner(m, dim) = -rows;

  DoubleDescription dd(std::move(cone));
  std::vector<Vec> rays = dd.run();

  Mat pts(static_cast<Eigen::Index>(rays.size()), dim);
  Eigen::Index count = 0;
  for (const auto& r : rays) {
    if (r(0) <= kEps) fail(ErrorCode::kRepresentation, "vertex enumeration: unbounded direction found");
    pts.row(count++) = (r.tail(dim) / r(0)).transpose();
  }
  Mat verts = unique_rows(pts.topRows(count), 1e-9);

  // Every vertex must be feasible and make dim linearly independent rows tight.
  for (Eigen::Index i = 0; i < verts.rows(); ++i) {
    const Vec slack = Vec::Ones(m) - rows * verts.row(i).transpose();
    const double scale = std::max(1.0, verts.row(i).norm());
    if (slack.minCoeff() < -1e-9 * scale) fail(ErrorCode::kInternal, "vertex enumeration: infeasible vertex");
    std::vector<Eigen::Index> tight;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (std::abs(slack(j)) <= 1e-8 * scale) tight.push_back(j);
    }
    Mat t(static_cast<Eigen::Index>(tight.size()), dim);
    for (std::size_t j = 0; j < tight.size(); ++j) t.row(static_cast<Eigen::Index>(j)) = rows.row(tight[j]);
    if (t.rows() < dim || Eigen::FullPivLU<Mat>(t).rank() < dim) {
      fail(ErrorCode::kInternal, "vertex enumeration: output point is not a vertex");
    }
  }
  return VPolytope{std::move(verts)};
}

std::optional<Mat> polytope_vertices(const Body& k, const EnumerationLimits& limits) {
  if (const auto* h = std::get_if<HPolytope>(&k.rep())) return vertex_enumerate(*h, limits).vertices;
  if (const auto* v = std::get_if<VPolytope>(&k.rep())) return v->vertices;
  if (const auto* li = std::get_if<LinearImage>(&k.rep())) {
    auto base = polytope_vertices(*li->base, limits);
    if (!base) return std::nullopt;
    return Mat(*base * li->map.transpose());
  }
  if (const auto* p = std::get_if<LagrangianProduct>(&k.rep())) {
    auto left = polytope_vertices(*p->left, limits);
    auto right = polytope_vertices(*p->right, limits);
    if (!left || !right) return std::nullopt;
    Mat out(left->rows() * right->rows(), k.dim());
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < left->rows(); ++i) {
      for (Eigen::Index j = 0; j < right->rows(); ++j) {
        out.row(r).head(left->cols()) = left->row(i);
        out.row(r).tail(right->cols()) = right->row(j);
        ++r;
      }
    }
    return out;
  }
  return std::nullopt;
}

std::optional<Mat> polytope_facets(const Body& k, const EnumerationLimits& limits) {
  if (const auto* h = std::get_if<HPolytope>(&k.rep())) return h->rows;
  if (const auto* v = std::get_if<VPolytope>(&k.rep())) {
    if (!k.origin_interior()) fail(ErrorCode::kRepresentation, "facets: origin not interior");
    return vertex_enumerate(HPolytope{v->vertices}, limits).vertices;
  }
  if (const auto* li = std::get_if<LinearImage>(&k.rep())) {
    auto base = polytope_facets(*li->base, limits);
    if (!base) return std::nullopt;
    return Mat(*base * li->inverse);
  }
  if (const auto* p = std::get_if<LagrangianProduct>(&k.rep())) {
    auto left = polytope_facets(*p->left, limits);
    auto right = polytope_facets(*p->right, limits);
    if (!left || !right) return std::nullopt;
    Mat out = Mat::Zero(left->rows() + right->rows(), k.dim());
    out.topLeftCorner(left->rows(), left->cols()) = *left;
    out.bottomRightCorner(right->rows(), right->cols()) = *right;
    return out;
  }
  return std::nullopt;
}

Mat extreme_points(const Mat& points, double tol) {
  const Mat pts = unique_rows(points, tol);
  if (pts.rows() <= 1) return pts;
  std::vector<Eigen::Index> keep;
  Mat others(pts.rows() - 1, pts.cols());
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    others.topRows(i) = pts.topRows(i);
    others.bottomRows(pts.rows() - 1 - i) = pts.bottomRows(pts.rows() - 1 - i);
    if (!detail::in_hull(others, pts.row(i).transpose(), tol)) keep.push_back(i);
  }
  Mat out(static_cast<Eigen::Index>(keep.size()), pts.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = pts.row(keep[r]);
  return out;
}

Body difference_body(const Body& k, const EnumerationLimits& limits) {
  if (const auto* e = std::get_if<Ellipsoid>(&k.rep())) return Body::ellipsoid(e->shape / 4.0);
  if (const auto* li = std::get_if<LinearImage>(&k.rep())) {
    return Body::linear_image(difference_body(*li->base, limits), li->map);
  }
  if (const auto* p = std::get_if<LagrangianProduct>(&k.rep())) {
    return Body::lagrangian_product(difference_body(*p->left, limits), difference_body(*p->right, limits));
  }
  auto verts = polytope_vertices(k, limits);
  if (!verts) fail(ErrorCode::kRepresentation, "difference_body: unsupported body");
  const Eigen::Index m = verts->rows();
  Mat diffs(m * (m - 1), k.dim());
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i != j) diffs.row(r++) = verts->row(i) - verts->row(j);
    }
  }
  if (r == 0) fail(ErrorCode::kRepresentation, "difference_body: degenerate polytope");
  return Body::vpolytope(extreme_points(diffs.topRows(r)));
}

}  // namespace sympcap
