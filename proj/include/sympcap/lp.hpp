#pragma once

// Dense two-phase simplex with Bland's anti-cycling rule. Meant for the
// desk-scale programs of this library (tens of rows, a few hundred columns);
// deterministic given its input.

#include <vector>

#include <Eigen/Dense>

namespace sympcap::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded };

/// maximize  c^T x
/// s.t.      a_ub x <= b_ub,  a_eq x = b_eq,
///           x_j >= 0 unless free[j].
/// An empty `free` means every variable is free.
struct Program {
  Eigen::VectorXd objective;
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  std::vector<bool> free;
};

struct Result {
  Status status = Status::kInfeasible;
  double value = 0.0;
  Eigen::VectorXd x;
};

Result solve(const Program& program, double tol = 1e-10);

}  // namespace sympcap::lp
