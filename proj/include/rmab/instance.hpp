#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rmab {

// Single-armed two-action MDP plus the budget fraction alpha.
// Transition data is stored flat as [state][action][next state].
class Instance {
 public:
  Instance() = default;
  Instance(std::string name, int n_states, double alpha,
           std::vector<double> transition, std::vector<double> reward);

  const std::string& name() const { return name_; }
  int n_states() const { return n_states_; }
  double alpha() const { return alpha_; }

  double p(int s, int a, int next) const {
    return transition_[(static_cast<std::size_t>(s) * 2 + a) * n_states_ + next];
  }
  double r(int s, int a) const { return reward_[static_cast<std::size_t>(s) * 2 + a]; }
  std::span<const double> row(int s, int a) const {
    return {transition_.data() + (static_cast<std::size_t>(s) * 2 + a) * n_states_,
            static_cast<std::size_t>(n_states_)};
  }

  // P(., a, .) as a square matrix.
  Eigen::MatrixXd action_matrix(int a) const;
  double r_max() const;

  const std::vector<double>& transition_data() const { return transition_; }
  const std::vector<double>& reward_data() const { return reward_; }

 private:
  std::string name_;
  int n_states_ = 0;
  double alpha_ = 0.0;
  std::vector<double> transition_;
  std::vector<double> reward_;
};

// Every violated invariant, one message each. Empty means usable.
std::vector<std::string> validate_instance(const Instance& inst);

// Throws Error(kInvalidInstance) listing the violations.
void require_valid(const Instance& inst);

// alpha * n as an integer, or Error(kAlphaNNotIntegral).
int budget_for(const Instance& inst, int n_arms);

using Actions = std::vector<std::uint8_t>;

class ArmPopulation {
 public:
  ArmPopulation() = default;
  ArmPopulation(int n_states, std::vector<int> states);

  int n_states() const { return n_states_; }
  int n_arms() const { return static_cast<int>(states_.size()); }
  int state(int arm) const { return states_[arm]; }
  const std::vector<int>& states() const { return states_; }
  std::vector<int>& mutable_states() { return states_; }

 private:
  int n_states_ = 0;
  std::vector<int> states_;
};

// Arm counts per state over a subset of arms; the 1/N scaling is applied
// only by the accessors.
struct StateCount {
  std::vector<int> counts;
  int n_arms = 0;

  int total() const;
  double value(int s) const { return static_cast<double>(counts[s]) / n_arms; }
  double mass() const { return static_cast<double>(total()) / n_arms; }
  Eigen::RowVectorXd scaled() const;
};

StateCount operator+(const StateCount& a, const StateCount& b);

StateCount state_count(const ArmPopulation& pop, std::span<const int> subset);
StateCount state_count(const ArmPopulation& pop);

struct StateActionCount {
  std::vector<int> counts;  // [state][action]
  int n_arms = 0;

  int at(int s, int a) const { return counts[static_cast<std::size_t>(s) * 2 + a]; }
  double value(int s, int a) const { return static_cast<double>(at(s, a)) / n_arms; }
  Eigen::MatrixXd scaled() const;
};

StateActionCount state_action_count(const ArmPopulation& pop, std::span<const std::uint8_t> actions);

}  // namespace rmab
