#include "densepack/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace densepack::lp {

namespace {

constexpr double kEps = 1e-11;

// Dense tableau: rows_ constraint rows plus one objective row (last).
// Column layout: [structural | artificial | rhs].
class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  Eigen::MatrixXd& t() { return t_; }
  std::vector<int>& basis() { return basis_; }
  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int rhs() const { return static_cast<int>(t_.cols()) - 1; }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Minimize the objective row over columns [0, ncols). Returns false if unbounded.
  bool run(int ncols) {
    const int obj = rows();
    for (int iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int c = 0; c < ncols; ++c) {
        if (t_(obj, c) < -kEps) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < obj; ++r) {
        if (t_(r, enter) > kEps) {
          const double ratio = t_(r, rhs()) / t_(r, enter);
          if (ratio < best - kEps ||
              (ratio < best + kEps && leave >= 0 && basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

Result maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());

  // Dual: rows = primal variables, columns = primal constraints.
  Tableau tab(n, m + n);
  auto& t = tab.t();
  for (int i = 0; i < n; ++i) {
    const double sign = c(i) < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < m; ++j) t(i, j) = sign * A(j, i);
    t(i, m + i) = 1.0;
    t(i, tab.rhs()) = sign * c(i);
    tab.basis()[static_cast<std::size_t>(i)] = m + i;
  }

  // Phase 1: minimize the sum of artificials.
  for (int i = 0; i < n; ++i) t.row(n) -= t.row(i);
  for (int i = 0; i < n; ++i) t(n, m + i) = 0.0;
  tab.run(m);
  const double scale = 1.0 + c.cwiseAbs().sum();
  if (-t(n, tab.rhs()) > 1e-9 * scale) {
    // A^T y = c has no nonnegative solution: the primal is unbounded (or infeasible).
    return {Status::unbounded, std::numeric_limits<double>::infinity()};
  }

  // Drive zero-level artificials out of the basis where possible.
  for (int r = 0; r < n; ++r) {
    if (tab.basis()[static_cast<std::size_t>(r)] < m) continue;
    for (int col = 0; col < m; ++col) {
      if (std::abs(t(r, col)) > 1e-9) {
        tab.pivot(r, col);
        break;
      }
    }
  }
  // Rows still carrying an artificial are redundant; freeze them.
  for (int r = 0; r < n; ++r) {
    if (tab.basis()[static_cast<std::size_t>(r)] >= m) {
      t.row(r).head(m).setZero();
    }
  }

  // Phase 2: minimize b.y.
  t.row(n).setZero();
  for (int j = 0; j < m; ++j) t(n, j) = b(j);
  for (int r = 0; r < n; ++r) {
    const int bc = tab.basis()[static_cast<std::size_t>(r)];
    if (bc < m && t(n, bc) != 0.0) t.row(n) -= t(n, bc) * t.row(r);
  }
  if (!tab.run(m)) {
    return {Status::infeasible, -std::numeric_limits<double>::infinity()};
  }
  return {Status::optimal, -t(n, tab.rhs())};
}

}  // namespace densepack::lp
