#pragma once

#include <vector>

#include <Eigen/Dense>

namespace rmab {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

// maximize c x  subject to  rows,  x_j >= 0 unless free[j].
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<RowSense> sense;
  std::vector<bool> free;  // empty means all nonnegative

  int n_vars() const { return static_cast<int>(objective.size()); }
  void add_row(const Eigen::RowVectorXd& coeffs, RowSense s, double rhs);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  Eigen::VectorXd x;
  double value = 0.0;
  double max_residual = 0.0;  // worst violation of the original rows and bounds
};

// Two-phase dense tableau simplex with Bland's rule.
LpResult solve_simplex(const LinearProgram& lp);

}  // namespace rmab
