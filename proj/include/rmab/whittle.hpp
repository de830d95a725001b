#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmab/instance.hpp"

namespace rmab {

struct SubsidySolution {
  Eigen::VectorXd h;          // relative values
  Eigen::VectorXd advantage;  // Q(s,1) - Q(s,0)
  double gain = 0.0;
  int iterations = 0;
};

// Relative value iteration for the single-armed MDP with reward
// r(s,a) + w 1{a=0}, run on the lazy chain tau I + (1-tau) P so that periodic
// instances converge. Advantages are reported on the original scale.
SubsidySolution solve_subsidy_mdp(const Instance& inst, double w, const Eigen::VectorXd* warm = nullptr);

struct WhittleTable {
  bool indexable = false;
  std::vector<double> index;  // valid only when indexable
  double grid_lo = 0.0, grid_hi = 0.0, grid_step = 1e-3;
  std::string note;
};

WhittleTable whittle_index(const Instance& inst, double grid_step = 1e-3, double refine_tol = 1e-6);

}  // namespace rmab
