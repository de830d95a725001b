#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmab/policies.hpp"

namespace rmab {

enum class InitKind { kAllInState, kUniformOver, kExplicit, kStationaryRounded };

struct InitialCondition {
  InitKind kind = InitKind::kStationaryRounded;
  int state = 0;                 // kAllInState
  std::vector<int> support;      // kUniformOver: each arm drawn uniformly from these
  std::vector<int> explicit_states;  // kExplicit: one entry per arm

  static InitialCondition all_in(int s);
  static InitialCondition uniform_over(std::vector<int> states);
  static InitialCondition from_states(std::vector<int> states);
  static InitialCondition stationary();
};

// Arm states at time 0. rng is only consulted for kUniformOver.
std::vector<int> initial_states(const InitialCondition& init, const LpSolution& lp, int n_arms,
                                RandomStream& rng);

struct SimConfig {
  int n_arms = 100;
  long horizon = 10000;
  long burn_in = -1;  // negative: min(10^4, T/10)
  int replications = 10;
  std::uint64_t master_seed = 1;
  InitialCondition init;
  bool diagnostics = false;
  bool record_series = false;  // per-step series of replication 0 (needs diagnostics)

  long effective_burn_in() const;
};

struct DiagnosticSeries {
  std::vector<double> d_ic, h_u, m_ol;
  std::vector<std::uint8_t> ol_full;
};

struct ReplicationResult {
  double avg_reward = 0.0;
  double d_ic_avg = 0.0;
  double h_u_avg = 0.0;
  double m_ol_avg = 0.0;
  double frac_ol_full = 0.0;
  std::optional<DiagnosticSeries> series;
};

struct GapMetrics {
  double gap_ratio = 0.0;
  double log_gap_ratio = 0.0;
};
// N (1 - avg / r_rel) and log10(max(1 - avg / r_rel, 1e-300)).
GapMetrics gap_metrics(double avg, double r_rel, int n_arms);

struct TrajectoryStats {
  std::string instance;
  std::string policy;
  int n_arms = 0;
  long horizon = 0;
  int replications = 0;
  std::uint64_t seed = 0;
  double avg_reward = 0.0;
  double ci_half = 0.0;  // 95% t-interval half width; 0 for a single replication
  double reward_sd = 0.0;
  double r_rel = 0.0;
  bool gap_defined = false;
  bool above_relaxation = false;  // estimate exceeded r_rel (noise)
  double gap_ratio = 0.0;
  double log_gap_ratio = 0.0;
  bool has_diagnostics = false;
  bool has_sets = false;
  double d_ic_avg = 0.0;
  double h_u_avg = 0.0;
  double m_ol_avg = 0.0;
  double frac_ol_full = 0.0;
  std::vector<double> replication_rewards;
  std::optional<DiagnosticSeries> series;
};

// One replication; seeds come from derive_seed(master_seed, rep, tag).
ReplicationResult run_replication(const PolicyContext& ctx, const Policy& proto, const SimConfig& cfg, int rep);

TrajectoryStats summarize(const PolicyContext& ctx, const std::string& policy, const SimConfig& cfg,
                          const std::vector<ReplicationResult>& reps);

TrajectoryStats simulate(std::shared_ptr<const PolicyContext> ctx, const std::string& policy,
                         const SimConfig& cfg);

// Half width of a 95% t-interval for the mean of the given values.
double t_interval_half_width(const std::vector<double>& values);

// Exact long-run average reward for tiny populations by building the chain
// over (arm states, policy memory) and Cesaro-averaging from the initial law.
double exact_chain_eval(const PolicyContext& ctx, const Policy& proto, int n_arms,
                        const InitialCondition& init, std::size_t max_states = 20000);
double exact_chain_eval(std::shared_ptr<const PolicyContext> ctx, const std::string& policy, int n_arms,
                        const InitialCondition& init);

}  // namespace rmab
