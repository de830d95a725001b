#include "rmab/simplex.hpp"

#include <cmath>
#include <limits>

namespace rmab {

void LinearProgram::add_row(const Eigen::RowVectorXd& coeffs, RowSense s, double rhs) {
  const Eigen::Index m = a.rows();
  if (m == 0) a.resize(0, coeffs.size());
  a.conservativeResize(m + 1, coeffs.size());
  a.row(m) = coeffs;
  b.conservativeResize(m + 1);
  b(m) = rhs;
  sense.push_back(s);
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr int kMaxIterations = 50000;

// Tableau with rows 0..m-1 holding constraints and row m the reduced costs
// d_j = c_B B^-1 a_j - c_j. Last column is the right-hand side.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<int> basis;

  int rows() const { return static_cast<int>(t.rows()) - 1; }
  int cols() const { return static_cast<int>(t.cols()) - 1; }

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i < t.rows(); ++i) {
      if (i == r) continue;
      const double f = t(i, c);
      if (f != 0.0) t.row(i) -= f * t.row(r);
    }
    basis[r] = c;
  }

  void price(const Eigen::VectorXd& cost) {
    const int m = rows();
    t.row(m).setZero();
    for (int j = 0; j < cols(); ++j) t(m, j) = -cost(j);
    for (int i = 0; i < m; ++i) t.row(m) += cost(basis[i]) * t.row(i);
  }

  // Runs Bland's rule on columns [0, n_active). Returns status.
  LpStatus optimize(int n_active) {
    const int m = rows();
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      int enter = -1;
      for (int j = 0; j < n_active; ++j) {
        if (t(m, j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double aij = t(i, enter);
        if (aij <= kPivotTol) continue;
        const double ratio = std::max(t(i, cols()), 0.0) / aij;
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      pivot(leave, enter);
    }
    return LpStatus::kIterationLimit;
  }
};

}  // namespace

LpResult solve_simplex(const LinearProgram& lp) {
  const int n = lp.n_vars();
  const int m = static_cast<int>(lp.a.rows());
  auto is_free = [&](int j) { return !lp.free.empty() && lp.free[j]; };

  // Column layout: original (split when free), then one slack per inequality,
  // then artificials.
  std::vector<int> pos_col(n), neg_col(n, -1);
  int cols = 0;
  for (int j = 0; j < n; ++j) {
    pos_col[j] = cols++;
    if (is_free(j)) neg_col[j] = cols++;
  }
  std::vector<int> slack_col(m, -1);
  for (int i = 0; i < m; ++i)
    if (lp.sense[i] != RowSense::kEqual) slack_col[i] = cols++;
  const int n_real = cols;

  Eigen::MatrixXd body = Eigen::MatrixXd::Zero(m, n_real);
  Eigen::VectorXd rhs = lp.b;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      body(i, pos_col[j]) = lp.a(i, j);
      if (neg_col[j] >= 0) body(i, neg_col[j]) = -lp.a(i, j);
    }
    if (slack_col[i] >= 0) body(i, slack_col[i]) = lp.sense[i] == RowSense::kLessEqual ? 1.0 : -1.0;
    if (rhs(i) < 0) {
      body.row(i) *= -1.0;
      rhs(i) = -rhs(i);
    }
  }

  std::vector<int> basis(m, -1);
  int n_art = 0;
  for (int i = 0; i < m; ++i) {
    if (slack_col[i] >= 0 && body(i, slack_col[i]) > 0.5)
      basis[i] = slack_col[i];
    else
      ++n_art;
  }
  const int total = n_real + n_art;
  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m + 1, total + 1);
  tab.t.topLeftCorner(m, n_real) = body;
  tab.t.block(0, total, m, 1) = rhs;
  tab.basis = basis;
  int next_art = n_real;
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] >= 0) continue;
    tab.t(i, next_art) = 1.0;
    tab.basis[i] = next_art++;
  }

  LpResult result;
  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
    phase1.tail(n_art).setConstant(-1.0);
    tab.price(phase1);
    const LpStatus st = tab.optimize(total);
    if (st == LpStatus::kIterationLimit) {
      result.status = st;
      return result;
    }
    const double infeas = -tab.t(m, total);
    const double scale = 1.0 + rhs.cwiseAbs().sum();
    if (infeas > 1e-9 * scale) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive artificials out of the basis or drop their redundant rows.
    std::vector<int> keep;
    for (int i = 0; i < tab.rows(); ++i) {
      if (tab.basis[i] < n_real) {
        keep.push_back(i);
        continue;
      }
      int col = -1;
      double best = 1e-9;
      for (int j = 0; j < n_real; ++j) {
        if (std::abs(tab.t(i, j)) > best) {
          best = std::abs(tab.t(i, j));
          col = j;
        }
      }
      if (col >= 0) {
        tab.pivot(i, col);
        keep.push_back(i);
      }
    }
    Tableau reduced;
    reduced.t.resize(static_cast<Eigen::Index>(keep.size()) + 1, n_real + 1);
    for (std::size_t k = 0; k < keep.size(); ++k) {
      reduced.t.row(k).head(n_real) = tab.t.row(keep[k]).head(n_real);
      reduced.t(k, n_real) = tab.t(keep[k], total);
      reduced.basis.push_back(tab.basis[keep[k]]);
    }
    tab = std::move(reduced);
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(tab.cols());
  for (int j = 0; j < n; ++j) {
    cost(pos_col[j]) = lp.objective(j);
    if (neg_col[j] >= 0) cost(neg_col[j]) = -lp.objective(j);
  }
  tab.price(cost);
  result.status = tab.optimize(tab.cols());
  if (result.status != LpStatus::kOptimal) return result;

  Eigen::VectorXd cols_value = Eigen::VectorXd::Zero(tab.cols());
  for (int i = 0; i < tab.rows(); ++i) cols_value(tab.basis[i]) = tab.t(i, tab.cols());
  result.x.resize(n);
  for (int j = 0; j < n; ++j) {
    result.x(j) = cols_value(pos_col[j]);
    if (neg_col[j] >= 0) result.x(j) -= cols_value(neg_col[j]);
  }
  // Clip the tiny negatives a tableau leaves on nonnegative variables.
  for (int j = 0; j < n; ++j)
    if (!is_free(j) && result.x(j) < 0.0 && result.x(j) > -1e-12) result.x(j) = 0.0;
  result.value = lp.objective.dot(result.x);

  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    const double lhs = lp.a.row(i).dot(result.x);
    double viol = 0.0;
    switch (lp.sense[i]) {
      case RowSense::kLessEqual: viol = lhs - lp.b(i); break;
      case RowSense::kGreaterEqual: viol = lp.b(i) - lhs; break;
      case RowSense::kEqual: viol = std::abs(lhs - lp.b(i)); break;
    }
    worst = std::max(worst, viol);
  }
  for (int j = 0; j < n; ++j)
    if (!is_free(j)) worst = std::max(worst, -result.x(j));
  result.max_residual = worst;
  return result;
}

}  // namespace rmab
