#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rmab/feasibility.hpp"
#include "rmab/instance.hpp"
#include "rmab/lp_relaxation.hpp"
#include "rmab/random.hpp"
#include "rmab/spectral.hpp"
#include "rmab/whittle.hpp"

namespace rmab {

// Immutable per-instance data shared by every policy and trajectory.
struct PolicyContext {
  Instance inst;
  LpSolution lp;
  std::optional<DualSolution> dual;
  SpectralBundle spectral;
  // Two-set runs its certified mode only when these all hold.
  bool certified = false;
  std::string certification_note;
  // Computed lazily by make_context when requested.
  std::optional<WhittleTable> whittle;
};

std::shared_ptr<const PolicyContext> make_context(const Instance& inst, bool with_whittle = false);

struct StepDiagnostics {
  double m_ol = 0.0;
  bool ol_full = false;
  bool has_sets = false;  // only the two-set policy reports them
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  // Prepares per-trajectory state for a population of n arms.
  virtual void reset(int n_arms) = 0;
  // Writes 0/1 actions for every arm; exactly alpha N of them are 1.
  virtual void act(const ArmPopulation& pop, ChoiceSource& rng, Actions& actions) = 0;
  virtual std::unique_ptr<Policy> clone() const = 0;

  // Finite summary of per-trajectory memory, for the exact chain evaluator.
  virtual std::vector<int> internal_state() const { return {}; }
  virtual void set_internal_state(const std::vector<int>&) {}
  virtual StepDiagnostics diagnostics() const { return {}; }
};

// Flips actions among the eligible arms, from the largest ID downwards, until
// exactly budget arms are active. Throws kBudgetUnreachable when impossible.
void rectify_budget(Actions& actions, const std::vector<char>& eligible, int budget);

// Activates states in a fixed priority order; within a state lowest IDs go
// first. Used by lp-index and whittle.
class PriorityPolicy final : public Policy {
 public:
  PriorityPolicy(std::string name, std::shared_ptr<const PolicyContext> ctx, std::vector<double> index);
  std::string name() const override { return name_; }
  void reset(int n_arms) override;
  void act(const ArmPopulation& pop, ChoiceSource& rng, Actions& actions) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<PriorityPolicy>(*this); }
  const std::vector<int>& order() const { return order_; }

 private:
  std::string name_;
  std::shared_ptr<const PolicyContext> ctx_;
  std::vector<int> order_;
  int budget_ = 0;
  std::vector<int> counts_, quota_;
};

// Every arm samples its ideal action from pibar, then the budget is repaired.
class IdPolicy final : public Policy {
 public:
  explicit IdPolicy(std::shared_ptr<const PolicyContext> ctx) : ctx_(std::move(ctx)) {}
  std::string name() const override { return "id"; }
  void reset(int n_arms) override;
  void act(const ArmPopulation& pop, ChoiceSource& rng, Actions& actions) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<IdPolicy>(*this); }

 private:
  std::shared_ptr<const PolicyContext> ctx_;
  int budget_ = 0;
  std::vector<char> all_;
};

std::vector<std::string> policy_names();

// "two-set" picks the certified or fallback mode from the context;
// "two-set-fallback" forces the fallback.
std::unique_ptr<Policy> make_policy(const std::string& name, std::shared_ptr<const PolicyContext> ctx);

}  // namespace rmab
