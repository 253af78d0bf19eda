#pragma once

#include <Eigen/Dense>

namespace densepack::lp {

enum class Status { optimal, infeasible, unbounded };

struct Result {
  Status status = Status::infeasible;
  double value = 0.0;
};

/// Optimal value of  max c.x  subject to  A x <= b  with x free.
///
/// Solved through the dual  min b.y, A^T y = c, y >= 0  by a two-phase
/// tableau simplex with Bland's rule. The dual has one row per primal
/// variable, so many constraints in few variables stay cheap.
Result maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace densepack::lp
