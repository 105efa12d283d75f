#include "sympcap/lp.hpp"

#include <cmath>
#include <limits>

#include "sympcap/error.hpp"

namespace sympcap::lp {

namespace {

class Tableau {
 public:
  Tableau(Eigen::MatrixXd rows, std::vector<int> basis, double tol)
      : t_(std::move(rows)), basis_(std::move(basis)), tol_(tol) {}

  Eigen::Index num_rows() const { return t_.rows() - 1; }
  Eigen::Index rhs_col() const { return t_.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) {
        t_.row(i) -= t_(i, c) * t_.row(r);
        t_(i, c) = 0.0;
      }
    }
    basis_[r] = static_cast<int>(c);
  }

  // Minimizes the objective row with Bland's rule over columns [0, limit).
  // Returns false when unbounded.
  bool run(Eigen::Index limit) {
    const Eigen::Index obj = num_rows();
    for (int iter = 0; iter < 200000; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < limit; ++j) {
        if (t_(obj, j) < -tol_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < obj; ++i) {
        const double a = t_(i, enter);
        if (a <= tol_) continue;
        const double ratio = t_(i, rhs_col()) / a;
        if (ratio < best - tol_ || (std::abs(ratio - best) <= tol_ && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    fail(ErrorCode::kInternal, "simplex iteration limit reached");
  }

  Eigen::MatrixXd& data() { return t_; }
  std::vector<int>& basis() { return basis_; }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  double tol_;
};

}  // namespace

Result solve(const Program& p, double tol) {
  const Eigen::Index nx = p.objective.size();
  const Eigen::Index m_ub = p.a_ub.rows();
  const Eigen::Index m_eq = p.a_eq.rows();
  if ((m_ub > 0 && p.a_ub.cols() != nx) || (m_eq > 0 && p.a_eq.cols() != nx) || p.b_ub.size() != m_ub ||
      p.b_eq.size() != m_eq || (!p.free.empty() && static_cast<Eigen::Index>(p.free.size()) != nx)) {
    fail(ErrorCode::kDimension, "lp: inconsistent program dimensions");
  }
  auto is_free = [&](Eigen::Index j) { return p.free.empty() || p.free[j]; };

  // Standard-form columns: split free variables, then slacks, then artificials.
  std::vector<Eigen::Index> pos_col(nx), neg_col(nx, -1);
  Eigen::Index ncol = 0;
  for (Eigen::Index j = 0; j < nx; ++j) {
    pos_col[j] = ncol++;
    if (is_free(j)) neg_col[j] = ncol++;
  }
  const Eigen::Index slack0 = ncol;
  ncol += m_ub;
  const Eigen::Index m = m_ub + m_eq;
  const Eigen::Index art0 = ncol;
  ncol += m;

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, ncol + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool ub = i < m_ub;
    const auto row = ub ? p.a_ub.row(i) : p.a_eq.row(i - m_ub);
    double rhs = ub ? p.b_ub(i) : p.b_eq(i - m_ub);
    for (Eigen::Index j = 0; j < nx; ++j) {
      t(i, pos_col[j]) = row(j);
      if (neg_col[j] >= 0) t(i, neg_col[j]) = -row(j);
    }
    if (ub) t(i, slack0 + i) = 1.0;
    t(i, ncol) = rhs;
    if (rhs < 0) t.row(i) *= -1.0;
    t(i, art0 + i) = 1.0;
  }
  // Phase one: minimize the sum of artificials.
  for (Eigen::Index i = 0; i < m; ++i) {
    t.row(m).head(art0) -= t.row(i).head(art0);
    t(m, ncol) -= t(i, ncol);
  }
  std::vector<int> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = static_cast<int>(art0 + i);

  Tableau tab(std::move(t), std::move(basis), tol);
  tab.run(ncol);

  double scale = 1.0;
  if (m_ub > 0) scale = std::max(scale, p.b_ub.cwiseAbs().maxCoeff());
  if (m_eq > 0) scale = std::max(scale, p.b_eq.cwiseAbs().maxCoeff());
  if (-tab.data()(m, ncol) > 1e-8 * scale) return {Status::kInfeasible, 0.0, {}};

  // Drive remaining artificials out of the basis; drop redundant rows.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis()[i] >= art0) {
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < art0; ++j) {
        if (std::abs(tab.data()(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) tab.pivot(i, col);
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis()[i] < art0) keep.push_back(i);
  }

  Eigen::MatrixXd t2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(keep.size()) + 1, art0 + 1);
  std::vector<int> basis2;
  for (std::size_t r = 0; r < keep.size(); ++r) {
    t2.row(static_cast<Eigen::Index>(r)).head(art0) = tab.data().row(keep[r]).head(art0);
    t2(static_cast<Eigen::Index>(r), art0) = tab.data()(keep[r], ncol);
    basis2.push_back(tab.basis()[keep[r]]);
  }
  const Eigen::Index obj = static_cast<Eigen::Index>(keep.size());
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(art0);
  for (Eigen::Index j = 0; j < nx; ++j) {
    cost(pos_col[j]) = -p.objective(j);
    if (neg_col[j] >= 0) cost(neg_col[j]) = p.objective(j);
  }
  t2.row(obj).head(art0) = cost.transpose();
  for (Eigen::Index r = 0; r < obj; ++r) {
    const double cb = cost(basis2[r]);
    if (cb != 0.0) t2.row(obj) -= cb * t2.row(r);
  }

  Tableau tab2(std::move(t2), std::move(basis2), tol);
  if (!tab2.run(art0)) return {Status::kUnbounded, std::numeric_limits<double>::infinity(), {}};

  Eigen::VectorXd standard = Eigen::VectorXd::Zero(art0);
  for (Eigen::Index r = 0; r < obj; ++r) standard(tab2.basis()[r]) = tab2.data()(r, art0);
  Result result;
  result.status = Status::kOptimal;
  result.x.resize(nx);
  for (Eigen::Index j = 0; j < nx; ++j) {
    result.x(j) = standard(pos_col[j]) - (neg_col[j] >= 0 ? standard(neg_col[j]) : 0.0);
  }
  result.value = p.objective.dot(result.x);
  return result;
}

}  // namespace sympcap::lp
