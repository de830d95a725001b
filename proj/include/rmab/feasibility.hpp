#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmab/lp_relaxation.hpp"
#include "rmab/spectral.hpp"

namespace rmab {

enum class PairSource { kClosedForm, kSocp, kFallbackReset };
const char* to_string(PairSource p);

struct FeasibilityPair {
  double eta = 0.0;
  double eps_fe = 0.0;
  PairSource provenance = PairSource::kClosedForm;
};

// Closed-form pair from the neutral state's two occupancy masses.
FeasibilityPair feasibility_pair_default(const LpSolution& lp, int n_arms);

// Optimal values of the two distance programs; nullopt when infeasible.
struct EtaPrograms {
  std::optional<double> eta1;
  std::optional<double> eta2;
  Eigen::VectorXd z1, z2;
};
EtaPrograms solve_eta_programs(const LpSolution& lp, const Eigen::MatrixXd& u);

// Pair from the two distance programs, with the reset to the closed-form
// pair in the corner cases where a program is infeasible.
FeasibilityPair feasibility_pair_socp(const LpSolution& lp, const SpectralBundle& spectral, int n_arms);

// delta(x, D) = eta m - ||x - m mu*||_U - eps_fe
double slack(const Eigen::RowVectorXd& x, double mass, const FeasibilityPair& pair,
             const Eigen::RowVectorXd& mu_star, const Eigen::MatrixXd& u);
double slack(const StateCount& x, const FeasibilityPair& pair, const Eigen::RowVectorXd& mu_star,
             const Eigen::MatrixXd& u);

// maximize sum z  s.t.  ||z - m mu||_U <= eta m - offset,  sum z = m,
// lower <= z <= upper.
struct SocpProblem {
  Eigen::MatrixXd gram;
  Eigen::RowVectorXd mu_star;
  double eta = 0.0;
  double offset = 0.0;
  Eigen::VectorXd lower, upper;
};

struct SocpSolution {
  Eigen::VectorXd z;
  double m = 0.0;
};

std::optional<SocpSolution> socp_solve(const SocpProblem& p);

// Everything maximal_feasible_set needs besides the counts.
struct OlContext {
  Eigen::MatrixXd gram;
  Eigen::RowVectorXd mu_star;
  FeasibilityPair pair;
  double eps_rd = 0.0;
  int n_arms = 0;
};

// (max(1, eta) + 2 sqrt(lambda_U)) |S| / N
double rounding_tolerance(double eta, double lambda_u, int n_states, int n_arms);

enum class OlBranch { kFull, kSuperset, kKeepPrevious, kShrinkGrow };
const char* to_string(OlBranch b);

struct OlTarget {
  std::vector<int> counts;       // per-state arm counts of the new set
  std::vector<int> temp_counts;  // intermediate subset of the previous set (shrink-grow only)
  OlBranch branch = OlBranch::kFull;
};

// Target per-state counts of an approximately maximal feasible subset.
// x_full: counts of all arms; x_prev: counts of the previous set.
OlTarget maximal_feasible_set(const std::vector<int>& x_full, const std::vector<int>& x_prev,
                              const OlContext& ctx);

}  // namespace rmab
