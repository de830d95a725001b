#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rmab/instance.hpp"

namespace rmab {

enum class TriState { kYes, kNo, kUnknown };
const char* to_string(TriState v);

struct StatePartition {
  std::vector<int> plus;   // only action 1 carries mass
  std::vector<int> minus;  // only action 0 carries mass
  std::vector<int> empty;  // no mass at all
  std::vector<int> zero;   // both actions carry mass
};

inline constexpr double kPartitionTol = 1e-6;

struct LpSolution {
  Eigen::MatrixXd y;      // |S| x 2 occupancy measure
  double alpha = 0.0;
  double r_rel = 0.0;
  Eigen::MatrixXd pibar;  // |S| x 2, rows sum to 1
  Eigen::RowVectorXd mu_star;
  StatePartition partition;
  std::vector<char> in_plus, in_minus, in_empty;  // membership masks
  std::optional<int> neutral_state;
  bool degenerate = true;
  TriState unique_optimum = TriState::kUnknown;

  double activate_prob(int s) const { return pibar(s, 1); }
};

struct DualSolution {
  double lambda_star = 0.0;
  Eigen::VectorXd f;
  double mu_dual = 0.0;
  Eigen::MatrixXd q;  // Q*(s,a)
  double eps0 = 0.0;  // +inf when y* has no zero coordinates

  double index(int s) const { return q(s, 1) - q(s, 0); }
};

Eigen::MatrixXd derive_single_armed_policy(const Eigen::MatrixXd& y);
StatePartition partition_states(const Eigen::MatrixXd& y, double tol = kPartitionTol);

// Solves the relaxation, derives pibar, mu*, the partition, and probes
// uniqueness of the optimum.
LpSolution solve_lp_relaxation(const Instance& inst);

DualSolution solve_dual_lp(const Instance& inst, const LpSolution& primal);

TriState probe_uniqueness(const Instance& inst, const LpSolution& primal);

// Incorrect-action mass of a state-action distribution.
double d_ic(const Eigen::MatrixXd& y, const StatePartition& partition);
double d_ic(const StateActionCount& y, const StatePartition& partition);

}  // namespace rmab
