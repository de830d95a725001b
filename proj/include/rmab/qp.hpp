#pragma once

#include <Eigen/Dense>

namespace rmab {

// minimize 1/2 z'Hz + g'z  s.t.  A_eq z = b_eq,  A_in z >= b_in.
struct QpProblem {
  Eigen::MatrixXd h;
  Eigen::VectorXd g;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd a_in;
  Eigen::VectorXd b_in;
};

struct QpResult {
  Eigen::VectorXd z;
  double value = 0.0;
  int iterations = 0;
};

// Primal active-set method from a feasible starting point. H must be
// positive definite. Throws Error(kSocpFailure) if it does not converge.
QpResult solve_qp(const QpProblem& p, const Eigen::VectorXd& start);

// min (z-c) G (z-c)'  over  lo <= z <= hi,  sum z = total.
struct BoxSumResult {
  Eigen::VectorXd z;
  double norm = 0.0;  // sqrt of the optimal objective
  double nu = 0.0;    // multiplier of the sum constraint (gradient scale 1/2)
};

// Specialised active-set solver: every inequality is a bound, so each
// working set is a set of pinned coordinates. Requires sum(lo) <= total <=
// sum(hi). At an end of that range nu is the one-sided value facing the
// interior.
BoxSumResult min_box_sum(const Eigen::MatrixXd& gram, const Eigen::VectorXd& center,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double total);

}  // namespace rmab
