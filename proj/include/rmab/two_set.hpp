#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rmab/feasibility.hpp"
#include "rmab/policies.hpp"

namespace rmab {

enum class ArmLabel : std::uint8_t { kNone = 0, kOl = 1, kPibs = 2 };

struct TwoSetState {
  std::vector<ArmLabel> labels;
  FeasibilityPair pair;
  double eps_rd = 0.0;
  OlBranch last_branch = OlBranch::kFull;
  double last_slack_full = 0.0;
  long retention_drops = 0;  // arms the capacity forced out of the pibar set
};

class TwoSetPolicy final : public Policy {
 public:
  TwoSetPolicy(std::shared_ptr<const PolicyContext> ctx, bool fallback);

  std::string name() const override { return fallback_ ? "two-set-fallback" : "two-set"; }
  void reset(int n_arms) override;
  void act(const ArmPopulation& pop, ChoiceSource& rng, Actions& actions) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<TwoSetPolicy>(*this); }
  std::vector<int> internal_state() const override;
  void set_internal_state(const std::vector<int>& v) override;
  StepDiagnostics diagnostics() const override { return diag_; }

  bool fallback() const { return fallback_; }
  const TwoSetState& state() const { return state_; }
  // Overrides the pair chosen at reset (tests).
  void set_pair(const FeasibilityPair& pair, double eps_rd);

 private:
  void select_ol(const ArmPopulation& pop);
  void select_pibs(int n_ol);
  void assign_actions(const ArmPopulation& pop, ChoiceSource& rng, Actions& actions, int n_ol);

  std::shared_ptr<const PolicyContext> ctx_;
  bool fallback_;
  int n_arms_ = 0;
  int budget_ = 0;
  double beta_ = 0.0;
  OlContext ol_ctx_;
  TwoSetState state_;
  StepDiagnostics diag_;
  std::vector<int> full_, prev_, quota_;
  std::vector<char> remaining_;
};

}  // namespace rmab
