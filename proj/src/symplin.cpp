#include "sympcap/symplin.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sympcap/error.hpp"

namespace sympcap {

int half_dim(Eigen::Index length) {
  if (length < 2 || length % 2 != 0) {
    fail(ErrorCode::kDimension, "expected an even length >= 2, got " + std::to_string(length));
  }
  return static_cast<int>(length / 2);
}

Mat complex_structure(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.block(0, n, n, n) = -Mat::Identity(n, n);
  j.block(n, 0, n, n) = Mat::Identity(n, n);
  return j;
}

Vec apply_J(const Vec& v) {
  const int n = half_dim(v.size());
  Vec out(v.size());
  out.head(n) = -v.tail(n);
  out.tail(n) = v.head(n);
  return out;
}

double omega(const Vec& v, const Vec& u) {
  if (v.size() != u.size()) {
    fail(ErrorCode::kDimension, "omega: dimension mismatch");
  }
  return v.dot(apply_J(u));
}

Vec e_q1(int n) {
  Vec e = Vec::Zero(2 * n);
  e(0) = 1.0;
  return e;
}

Vec e_p1(int n) {
  Vec e = Vec::Zero(2 * n);
  e(n) = 1.0;
  return e;
}

double symplectic_residual(const Mat& linear) {
  const int n = half_dim(linear.rows());
  if (linear.cols() != linear.rows()) {
    fail(ErrorCode::kDimension, "symplectic map must be square");
  }
  const Mat j = complex_structure(n);
  return (linear.transpose() * j * linear - j).cwiseAbs().maxCoeff();
}

SymplecticMap::SymplecticMap(Mat linear, double tol)
    : SymplecticMap(linear, Vec::Zero(linear.rows()), tol) {}

SymplecticMap::SymplecticMap(Mat linear, Vec translation, double tol)
    : linear_(std::move(linear)), translation_(std::move(translation)) {
  if (translation_.size() != linear_.rows()) {
    fail(ErrorCode::kDimension, "translation length does not match linear part");
  }
  const double residual = symplectic_residual(linear_);
  if (!(residual <= tol)) {
    fail(ErrorCode::kDomain, "linear part is not symplectic (residual " + std::to_string(residual) + ")");
  }
}

SymplecticMap SymplecticMap::identity(int n) { return SymplecticMap(Mat::Identity(2 * n, 2 * n)); }

SymplecticMap SymplecticMap::compose(const SymplecticMap& other) const {
  // Products of maps that individually pass at 1e-9 can drift slightly above
  // it after many compositions; revalidate at a looser bound.
  return SymplecticMap(linear_ * other.linear_, linear_ * other.translation_ + translation_, 1e-7);
}

SymplecticMap SymplecticMap::without_translation() const { return SymplecticMap(linear_, 1e-7); }

bool is_symplectic(const Mat& linear, double tol) {
  if (linear.rows() != linear.cols() || linear.rows() < 2 || linear.rows() % 2 != 0) return false;
  return symplectic_residual(linear) <= tol;
}

bool is_symplectic(const SymplecticMap& s, double tol) { return is_symplectic(s.linear(), tol); }

SymplecticMap cayley_symplectic(const Mat& m, const CayleyOptions& options) {
  const int n = half_dim(m.rows());
  if (m.cols() != m.rows()) fail(ErrorCode::kDimension, "cayley: parameter must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff())) {
    fail(ErrorCode::kDomain, "cayley: parameter must be symmetric");
  }
  const Mat half_jm = 0.5 * complex_structure(n) * m;
  const Mat id = Mat::Identity(2 * n, 2 * n);
  Eigen::PartialPivLU<Mat> lu(id - half_jm);
  const double rcond = lu.rcond();
  if (!(rcond * options.max_condition > 1.0)) {
    fail(ErrorCode::kDomain, "cayley: I - JM/2 is near singular");
  }
  Mat s = lu.solve(id + half_jm);
  return SymplecticMap(std::move(s), 1e-7);
}

namespace {

// Removes from x its components along the symplectic pair (a, b), where
// omega(a, b) = -1.
void project_out(Vec& x, const Vec& a, const Vec& b) {
  const double xa = omega(x, a);
  const double xb = omega(x, b);
  x += xb * a - xa * b;
}

}  // namespace

SymplecticCompletion complete_to_symplectic(const Vec& v, const Vec& w, double tol) {
  const int n = half_dim(v.size());
  if (w.size() != v.size()) fail(ErrorCode::kDimension, "complete_to_symplectic: dimension mismatch");

  Mat pair(v.size(), 2);
  pair << v, w;
  Eigen::JacobiSVD<Mat> svd(pair);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(1) <= 1e-12 * sv(0)) {
    fail(ErrorCode::kRank, "complete_to_symplectic: v and w are linearly dependent");
  }

  const double wv = omega(w, v);
  if (!(std::abs(std::abs(wv) - 1.0) <= tol)) {
    fail(ErrorCode::kNormalization, "complete_to_symplectic: |omega(w, v)| = " + std::to_string(std::abs(wv)));
  }
  const int sign = wv > 0 ? 1 : -1;

  // Columns of T are the images of the standard basis; S = T^T.
  std::vector<Vec> qs{v};
  std::vector<Vec> ps{sign * w};
  // Rescale so that omega(a_1, b_1) = -1 exactly, absorbing the tolerance.
  ps[0] /= std::abs(wv);

  for (int k = 1; k < n; ++k) {
    Vec best;
    double best_norm = -1.0;
    for (int i = 0; i < 2 * n; ++i) {
      Vec x = Vec::Unit(2 * n, i);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < qs.size(); ++j) project_out(x, qs[j], ps[j]);
      }
      const double norm = x.norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = x;
      }
    }
    if (best_norm <= 1e-12) fail(ErrorCode::kInternal, "symplectic Gram-Schmidt lost rank");
    Vec a = best / best_norm;
    Vec b = apply_J(a);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < qs.size(); ++j) project_out(b, qs[j], ps[j]);
    }
    b /= -omega(a, b);
    qs.push_back(std::move(a));
    ps.push_back(std::move(b));
  }

  Mat t(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    t.col(k) = qs[k];
    t.col(n + k) = ps[k];
  }
  return {SymplecticMap(t.transpose()), sign};
}

int symmetric_param_count(int size) { return size * (size + 1) / 2; }

Mat symmetric_from_upper(const Vec& params, int size) {
  if (params.size() != symmetric_param_count(size)) {
    fail(ErrorCode::kDimension, "symmetric_from_upper: wrong parameter count");
  }
  Mat m(size, size);
  Eigen::Index k = 0;
  for (int i = 0; i < size; ++i) {
    for (int j = i; j < size; ++j) {
      m(i, j) = params(k);
      m(j, i) = params(k);
      ++k;
    }
  }
  return m;
}

}  // namespace sympcap
