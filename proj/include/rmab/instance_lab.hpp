#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmab/instance.hpp"
#include "rmab/lp_relaxation.hpp"
#include "rmab/simulator.hpp"

namespace rmab {

std::vector<std::string> builtin_names();
Instance builtin(const std::string& name);
// Initial condition used by the experiments on each builtin.
InitialCondition builtin_initial_condition(const std::string& name);

// P rows and each reward column r(., a) drawn uniformly from the simplex;
// alpha uniform on {0.1, ..., 0.9} unless given.
Instance random_uniform(int n_states, std::uint64_t seed, std::optional<double> alpha = std::nullopt);

struct Certificate {
  std::string instance;
  bool a1_aperiodic_unichain = false;
  std::vector<double> eig_p;
  bool a2_nondegenerate = false;
  std::optional<int> neutral_state;
  bool a3_local_stability = false;
  std::vector<double> eig_phi;
  TriState regular_unstable = TriState::kNo;
  TriState unique_optimum = TriState::kUnknown;
  bool full_support = false;
  bool spectrum_condition = false;  // some modulus > 1, none on the unit circle
  bool all_positive_p = false;      // sufficient noise condition
  std::optional<double> eta_closed_form;
  std::optional<double> eta_socp;
  std::optional<double> lambda_w, lambda_u;
  std::vector<std::string> notes;
};

Certificate certify(const Instance& inst);

}  // namespace rmab
