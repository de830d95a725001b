#include "rmab/whittle.hpp"

#include <cmath>

#include "rmab/error.hpp"

namespace rmab {

namespace {

constexpr double kTau = 0.5;
constexpr double kSpanTol = 1e-10;
constexpr int kMaxIterations = 100000;
// Passive counts as optimal when the advantage of acting is below this; a
// later advantage above kClearlyActive after passivity is a nesting failure.
constexpr double kPassiveTol = 1e-9;
constexpr double kClearlyActive = 1e-7;

}  // namespace

SubsidySolution solve_subsidy_mdp(const Instance& inst, double w, const Eigen::VectorXd* warm) {
  const int n = inst.n_states();
  Eigen::MatrixXd p0 = inst.action_matrix(0), p1 = inst.action_matrix(1);
  Eigen::VectorXd r0(n), r1(n);
  for (int s = 0; s < n; ++s) {
    r0(s) = inst.r(s, 0) + w;
    r1(s) = inst.r(s, 1);
  }
  Eigen::VectorXd h = warm ? *warm : Eigen::VectorXd::Zero(n);
  Eigen::VectorXd q0(n), q1(n), next(n);
  SubsidySolution out;
  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    q0 = r0 + kTau * h + (1.0 - kTau) * (p0 * h);
    q1 = r1 + kTau * h + (1.0 - kTau) * (p1 * h);
    next = q0.cwiseMax(q1);
    const Eigen::VectorXd diff = next - h;
    const double span = diff.maxCoeff() - diff.minCoeff();
    out.gain = diff(0);
    h = next.array() - next(0);
    if (span < kSpanTol) {
      q0 = r0 + kTau * h + (1.0 - kTau) * (p0 * h);
      q1 = r1 + kTau * h + (1.0 - kTau) * (p1 * h);
      out.h = h;
      out.advantage = q1 - q0;
      out.iterations = iter;
      return out;
    }
  }
  throw Error(ErrorCode::kValueIterationDivergence,
              "relative value iteration did not converge at subsidy " + std::to_string(w));
}

WhittleTable whittle_index(const Instance& inst, double grid_step, double refine_tol) {
  require_valid(inst);
  const int n = inst.n_states();
  WhittleTable table;
  table.grid_step = grid_step;
  const double r_max = std::max(inst.r_max(), grid_step);
  table.grid_lo = -2.0 * r_max;
  table.grid_hi = 2.0 * r_max;
  const int points = static_cast<int>(std::floor((table.grid_hi - table.grid_lo) / grid_step + 1e-9)) + 1;

  // first grid point where each state is passive
  std::vector<int> first_passive(n, -1);
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::VectorXd> warm_at(points);
  for (int k = 0; k < points; ++k) {
    const double w = table.grid_lo + k * grid_step;
    const SubsidySolution sol = solve_subsidy_mdp(inst, w, &warm);
    warm = sol.h;
    warm_at[k] = sol.h;
    for (int s = 0; s < n; ++s) {
      const double adv = sol.advantage(s);
      if (adv <= kPassiveTol) {
        if (first_passive[s] < 0) first_passive[s] = k;
      } else if (first_passive[s] >= 0 && adv > kClearlyActive) {
        table.indexable = false;
        table.note = "state " + std::to_string(s) + " is passive at subsidy " +
                     std::to_string(table.grid_lo + first_passive[s] * grid_step) +
                     " but active again at " + std::to_string(w);
        return table;
      }
    }
  }

  table.indexable = true;
  table.index.assign(n, table.grid_hi);
  for (int s = 0; s < n; ++s) {
    const int k = first_passive[s];
    if (k < 0) {
      table.note += "state " + std::to_string(s) + " never passive on the grid; ";
      continue;
    }
    if (k == 0) {
      table.index[s] = table.grid_lo;
      table.note += "state " + std::to_string(s) + " passive on the whole grid; ";
      continue;
    }
    double lo = table.grid_lo + (k - 1) * grid_step;  // active
    double hi = table.grid_lo + k * grid_step;        // passive
    Eigen::VectorXd guess = warm_at[k];
    while (hi - lo > refine_tol) {
      const double mid = 0.5 * (lo + hi);
      const SubsidySolution sol = solve_subsidy_mdp(inst, mid, &guess);
      guess = sol.h;
      if (sol.advantage(s) <= kPassiveTol) hi = mid;
      else lo = mid;
    }
    table.index[s] = 0.5 * (lo + hi);
  }
  return table;
}

}  // namespace rmab
