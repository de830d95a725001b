#include "rmab/subroutines.hpp"

#include <cmath>

#include "rmab/error.hpp"

namespace rmab {

int randomized_round(double target, ChoiceSource& rng) {
  const double nearest = std::round(target);
  if (std::abs(target - nearest) <= 1e-9) return static_cast<int>(nearest);
  const double fl = std::floor(target);
  return static_cast<int>(fl) + (rng.bernoulli(target - fl) ? 1 : 0);
}

int ActivationPlan::total() const {
  int t = 0;
  for (int v : per_state) t += v;
  return t;
}

ActivationPlan unconstrained_optimal_control(const std::vector<int>& z, const LpSolution& lp,
                                             ChoiceSource& rng) {
  ActivationPlan plan;
  plan.per_state.resize(z.size());
  for (std::size_t s = 0; s < z.size(); ++s) {
    const double p = lp.pibar(static_cast<Eigen::Index>(s), 1);
    int a = 0;
    if (p >= 1.0) a = z[s];
    else if (p > 0.0) a = randomized_round(p * z[s], rng);
    plan.per_state[s] = std::clamp(a, 0, z[s]);
  }
  return plan;
}

bool check_olc_feasible(const std::vector<int>& z, int n, double alpha, const LpSolution& lp) {
  if (!lp.neutral_state) throw Error(ErrorCode::kDegenerate, "no unique neutral state");
  const int sn = *lp.neutral_state;
  double act = 0.0, pas = 0.0;
  for (std::size_t s = 0; s < z.size(); ++s) {
    if (static_cast<int>(s) == sn) continue;
    act += lp.pibar(static_cast<Eigen::Index>(s), 1) * z[s];
    pas += lp.pibar(static_cast<Eigen::Index>(s), 0) * z[s];
  }
  const double margin = static_cast<double>(lp.partition.empty.size()) + 1.0;
  const double tol = 1e-9 * (1.0 + n);
  return act <= alpha * n - margin + tol && pas <= (1.0 - alpha) * n - margin + tol;
}

ActivationPlan optimal_local_control(const std::vector<int>& z, int n, double alpha,
                                     const LpSolution& lp, ChoiceSource& rng) {
  if (!check_olc_feasible(z, n, alpha, lp))
    throw Error(ErrorCode::kFeasibilityAssertionFailed, "local control budget conditions fail");
  const int sn = *lp.neutral_state;
  ActivationPlan plan;
  plan.per_state.assign(z.size(), 0);
  plan.budget = randomized_round(alpha * n, rng);
  int used = 0;
  for (std::size_t s = 0; s < z.size(); ++s) {
    if (static_cast<int>(s) == sn) continue;
    if (lp.in_plus[s]) plan.per_state[s] = z[s];
    else if (lp.in_empty[s]) plan.per_state[s] = randomized_round(0.5 * z[s], rng);
    used += plan.per_state[s];
  }
  const int rest = plan.budget - used;
  if (rest < 0 || rest > z[sn])
    throw Error(ErrorCode::kFeasibilityAssertionFailed,
                "neutral state cannot absorb the remaining budget " + std::to_string(rest));
  plan.per_state[sn] = rest;
  return plan;
}

}  // namespace rmab
