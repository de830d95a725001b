#include "rmab/lp_relaxation.hpp"

#include <cmath>
#include <limits>

#include "rmab/error.hpp"
#include "rmab/simplex.hpp"

namespace rmab {

const char* to_string(TriState v) {
  switch (v) {
    case TriState::kYes: return "yes";
    case TriState::kNo: return "no";
    case TriState::kUnknown: return "unknown";
  }
  return "unknown";
}

namespace {

int var(int s, int a) { return s * 2 + a; }

// Constraint rows of the relaxation over y(s,a).
LinearProgram relaxation_rows(const Instance& inst) {
  const int n = inst.n_states();
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Zero(2 * n);
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < 2; ++a) lp.objective(var(s, a)) = inst.r(s, a);

  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(2 * n);
  for (int s = 0; s < n; ++s) row(var(s, 1)) = 1.0;
  lp.add_row(row, RowSense::kEqual, inst.alpha());

  for (int s = 0; s < n; ++s) {
    row.setZero();
    for (int sp = 0; sp < n; ++sp)
      for (int a = 0; a < 2; ++a) row(var(sp, a)) += inst.p(sp, a, s);
    row(var(s, 0)) -= 1.0;
    row(var(s, 1)) -= 1.0;
    lp.add_row(row, RowSense::kEqual, 0.0);
  }
  row.setOnes();
  lp.add_row(row, RowSense::kEqual, 1.0);
  return lp;
}

void check_lp(const LpResult& res, const char* what) {
  if (res.status == LpStatus::kInfeasible)
    throw Error(ErrorCode::kLpInfeasible, std::string(what) + " is infeasible");
  if (res.status != LpStatus::kOptimal)
    throw Error(ErrorCode::kNumericalFailure, std::string(what) + " did not reach optimality");
  if (res.max_residual > 1e-9)
    throw Error(ErrorCode::kNumericalFailure,
                std::string(what) + " residual " + std::to_string(res.max_residual));
}

}  // namespace

Eigen::MatrixXd derive_single_armed_policy(const Eigen::MatrixXd& y) {
  Eigen::MatrixXd pi(y.rows(), 2);
  for (Eigen::Index s = 0; s < y.rows(); ++s) {
    const double mass = y(s, 0) + y(s, 1);
    if (mass > 0.0) {
      pi(s, 0) = y(s, 0) / mass;
      pi(s, 1) = y(s, 1) / mass;
    } else {
      pi(s, 0) = pi(s, 1) = 0.5;
    }
  }
  return pi;
}

StatePartition partition_states(const Eigen::MatrixXd& y, double tol) {
  StatePartition out;
  for (int s = 0; s < static_cast<int>(y.rows()); ++s) {
    const bool act = y(s, 1) > tol;
    const bool pas = y(s, 0) > tol;
    if (act && pas)
      out.zero.push_back(s);
    else if (act)
      out.plus.push_back(s);
    else if (pas)
      out.minus.push_back(s);
    else
      out.empty.push_back(s);
  }
  return out;
}

LpSolution solve_lp_relaxation(const Instance& inst) {
  require_valid(inst);
  const int n = inst.n_states();
  const LinearProgram lp = relaxation_rows(inst);
  const LpResult res = solve_simplex(lp);
  check_lp(res, "LP relaxation");

  LpSolution sol;
  sol.alpha = inst.alpha();
  sol.y.resize(n, 2);
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < 2; ++a) sol.y(s, a) = res.x(var(s, a));
  sol.r_rel = 0.0;
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < 2; ++a) sol.r_rel += inst.r(s, a) * sol.y(s, a);
  sol.mu_star = (sol.y.col(0) + sol.y.col(1)).transpose();
  sol.partition = partition_states(sol.y);
  sol.pibar = derive_single_armed_policy(sol.y);

  sol.in_plus.assign(n, 0);
  sol.in_minus.assign(n, 0);
  sol.in_empty.assign(n, 0);
  // Snap the non-neutral rows to their exact values so the subroutines see
  // 0, 1 or 1/2 rather than ratios polluted by 1e-17 residue.
  for (int s : sol.partition.plus) {
    sol.in_plus[s] = 1;
    sol.pibar(s, 0) = 0.0;
    sol.pibar(s, 1) = 1.0;
  }
  for (int s : sol.partition.minus) {
    sol.in_minus[s] = 1;
    sol.pibar(s, 0) = 1.0;
    sol.pibar(s, 1) = 0.0;
  }
  for (int s : sol.partition.empty) {
    sol.in_empty[s] = 1;
    sol.pibar(s, 0) = sol.pibar(s, 1) = 0.5;
  }
  sol.degenerate = sol.partition.zero.size() != 1;
  if (!sol.degenerate) sol.neutral_state = sol.partition.zero.front();
  sol.unique_optimum = probe_uniqueness(inst, sol);
  return sol;
}

TriState probe_uniqueness(const Instance& inst, const LpSolution& primal) {
  const int n = inst.n_states();
  bool borderline = false;
  try {
    for (int s = 0; s < n; ++s) {
      for (int a = 0; a < 2; ++a) {
        if (primal.y(s, a) > kPartitionTol) continue;
        LinearProgram lp = relaxation_rows(inst);
        Eigen::RowVectorXd reward = lp.objective.transpose();
        lp.add_row(reward, RowSense::kGreaterEqual,
                   primal.r_rel - 1e-11 * (1.0 + std::abs(primal.r_rel)));
        lp.objective.setZero();
        lp.objective(var(s, a)) = 1.0;
        const LpResult res = solve_simplex(lp);
        if (res.status != LpStatus::kOptimal || res.max_residual > 1e-9) return TriState::kUnknown;
        if (res.value > 1e-6) return TriState::kNo;
        if (res.value > 1e-8) borderline = true;
      }
    }
  } catch (const Error&) {
    return TriState::kUnknown;
  }
  return borderline ? TriState::kUnknown : TriState::kYes;
}

DualSolution solve_dual_lp(const Instance& inst, const LpSolution& primal) {
  const int n = inst.n_states();
  const double alpha = inst.alpha();
  // Variables: lambda, mu, f(0..n-1); all free.
  const int nv = 2 + n;
  const int il = 0, im = 1;
  auto fcol = [](int s) { return 2 + s; };

  auto dual_rows = [&](LinearProgram& lp, int extra_cols) {
    for (int s = 0; s < n; ++s) {
      for (int a = 0; a < 2; ++a) {
        // (alpha - a) lambda - mu + sum_s' P f(s') - f(s) <= -r(s,a)
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nv + extra_cols);
        row(il) = alpha - a;
        row(im) = -1.0;
        for (int sp = 0; sp < n; ++sp) row(fcol(sp)) += inst.p(s, a, sp);
        row(fcol(s)) -= 1.0;
        lp.add_row(row, RowSense::kLessEqual, -inst.r(s, a));
      }
    }
    Eigen::RowVectorXd anchor = Eigen::RowVectorXd::Zero(nv + extra_cols);
    anchor(fcol(0)) = 1.0;
    lp.add_row(anchor, RowSense::kEqual, 0.0);
  };

  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Zero(nv);
  lp.objective(im) = -1.0;
  lp.free.assign(nv, true);
  dual_rows(lp, 0);
  const LpResult first = solve_simplex(lp);
  check_lp(first, "dual LP");
  const double mu_dual = first.x(im);

  // Second pass: stay on the optimal face and push the slack of every
  // primal-zero coordinate up together.
  std::vector<std::pair<int, int>> zeros;
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < 2; ++a)
      if (primal.y(s, a) <= kPartitionTol) zeros.emplace_back(s, a);

  Eigen::VectorXd x = first.x;
  if (!zeros.empty()) {
    LinearProgram face;
    face.objective = Eigen::VectorXd::Zero(nv + 1);
    face.objective(nv) = 1.0;
    face.free.assign(nv + 1, true);
    dual_rows(face, 1);
    Eigen::RowVectorXd fix = Eigen::RowVectorXd::Zero(nv + 1);
    fix(im) = 1.0;
    face.add_row(fix, RowSense::kEqual, mu_dual);
    for (auto [s, a] : zeros) {
      // f(s) - (alpha - a) lambda + mu - sum P f >= r(s,a) + t
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(nv + 1);
      row(il) = -(alpha - a);
      row(im) = 1.0;
      for (int sp = 0; sp < n; ++sp) row(fcol(sp)) -= inst.p(s, a, sp);
      row(fcol(s)) += 1.0;
      row(nv) = -1.0;
      face.add_row(row, RowSense::kGreaterEqual, inst.r(s, a));
    }
    Eigen::RowVectorXd cap = Eigen::RowVectorXd::Zero(nv + 1);
    cap(nv) = 1.0;
    face.add_row(cap, RowSense::kLessEqual, 1.0);
    const LpResult second = solve_simplex(face);
    if (second.status == LpStatus::kOptimal && second.max_residual <= 1e-9)
      x = second.x.head(nv);
  }

  DualSolution dual;
  dual.lambda_star = x(il);
  dual.mu_dual = x(im);
  dual.f = x.segment(2, n);
  dual.q.resize(n, 2);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < 2; ++a) {
      double v = inst.r(s, a) - dual.lambda_star * a + dual.lambda_star * alpha - primal.r_rel;
      for (int sp = 0; sp < n; ++sp) v += inst.p(s, a, sp) * dual.f(sp);
      dual.q(s, a) = v;
    }
  }
  dual.eps0 = std::numeric_limits<double>::infinity();
  for (auto [s, a] : zeros) dual.eps0 = std::min(dual.eps0, dual.f(s) - dual.q(s, a));
  if (dual.eps0 < 0.0 && dual.eps0 > -1e-9) dual.eps0 = 0.0;
  if (std::abs(dual.mu_dual - primal.r_rel) > 1e-7)
    throw Error(ErrorCode::kNumericalFailure, "dual optimum does not match the primal optimum");
  return dual;
}

double d_ic(const Eigen::MatrixXd& y, const StatePartition& partition) {
  double out = 0.0;
  for (int s : partition.plus) out += y(s, 0);
  for (int s : partition.minus) out += y(s, 1);
  return out;
}

double d_ic(const StateActionCount& y, const StatePartition& partition) {
  long wrong = 0;
  for (int s : partition.plus) wrong += y.at(s, 0);
  for (int s : partition.minus) wrong += y.at(s, 1);
  return static_cast<double>(wrong) / y.n_arms;
}

}  // namespace rmab
