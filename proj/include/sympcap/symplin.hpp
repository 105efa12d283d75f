#pragma once

// Fixed linear symplectic structure on R^{2n}.
//
// Coordinates are ordered (q_1, ..., q_n, p_1, ..., p_n). The complex
// structure acts by J(q, p) = (-p, q) and the symplectic form is
// omega(v, u) = <v, J u>.

#include <Eigen/Dense>

namespace sympcap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kSymplecticTol = 1e-9;

/// Half dimension n of a vector in R^{2n}; throws on odd or empty length.
int half_dim(Eigen::Index length);

Mat complex_structure(int n);
Vec apply_J(const Vec& v);
double omega(const Vec& v, const Vec& u);

/// Unit vector along q_1 (the `e` of the cylinder projection) and along p_1.
Vec e_q1(int n);
Vec e_p1(int n);

/// max-norm of L^T J L - J.
double symplectic_residual(const Mat& linear);

/// Affine map x -> L x + t with symplectic linear part. Construction
/// validates L^T J L = J to within the supplied tolerance.
class SymplecticMap {
 public:
  explicit SymplecticMap(Mat linear, double tol = kSymplecticTol);
  SymplecticMap(Mat linear, Vec translation, double tol = kSymplecticTol);

  static SymplecticMap identity(int n);

  const Mat& linear() const { return linear_; }
  const Vec& translation() const { return translation_; }
  int n() const { return static_cast<int>(linear_.rows() / 2); }

  Vec apply(const Vec& x) const { return linear_ * x + translation_; }
  /// (this * other)(x) = this(other(x)).
  SymplecticMap compose(const SymplecticMap& other) const;
  SymplecticMap without_translation() const;

 private:
  Mat linear_;
  Vec translation_;
};

bool is_symplectic(const SymplecticMap& s, double tol);
bool is_symplectic(const Mat& linear, double tol);

struct CayleyOptions {
  /// Reject parameters for which I - JM/2 has condition number above this.
  double max_condition = 1e10;
};

/// S = (I - JM/2)^{-1} (I + JM/2) for symmetric M. Throws kDomain near the
/// singular set of I - JM/2.
SymplecticMap cayley_symplectic(const Mat& m, const CayleyOptions& options = {});

struct SymplecticCompletion {
  SymplecticMap map;
  /// +1 when S^T J e = w, -1 when S^T J e = -w.
  int sign;
};

/// Builds S in Sp(2n) with S^T e = v and S^T J e = sign * w by symplectic
/// Gram-Schmidt. Requires |omega(w, v)| = 1 within `tol`.
SymplecticCompletion complete_to_symplectic(const Vec& v, const Vec& w, double tol = 1e-9);

/// Symmetric matrix from its upper triangle listed row by row.
Mat symmetric_from_upper(const Vec& params, int size);
int symmetric_param_count(int size);

}  // namespace sympcap
