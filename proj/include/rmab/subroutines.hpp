#pragma once

#include <vector>

#include "rmab/lp_relaxation.hpp"
#include "rmab/random.hpp"

namespace rmab {

// floor(target) + Bernoulli(frac). Targets within 1e-9 of an integer are
// snapped so that float noise in products like 0.45 * 100 stays exact.
int randomized_round(double target, ChoiceSource& rng);

struct ActivationPlan {
  std::vector<int> per_state;
  int budget = -1;  // declared budget, -1 when none

  int total() const;
};

// Each state independently activates pibar(1|s) z(s) arms in expectation.
ActivationPlan unconstrained_optimal_control(const std::vector<int>& z, const LpSolution& lp,
                                             ChoiceSource& rng);

// Budget conditions under which local control can place its remainder on
// the neutral state. z are counts, n = sum z.
bool check_olc_feasible(const std::vector<int>& z, int n, double alpha, const LpSolution& lp);

// Activates S+ fully, S- not at all, S-empty by halves, and the neutral
// state absorbs what is left of B = round(alpha n).
ActivationPlan optimal_local_control(const std::vector<int>& z, int n, double alpha,
                                     const LpSolution& lp, ChoiceSource& rng);

}  // namespace rmab
