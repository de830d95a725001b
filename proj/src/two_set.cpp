#include "rmab/two_set.hpp"

#include <algorithm>
#include <cmath>

#include "rmab/error.hpp"
#include "rmab/subroutines.hpp"

namespace rmab {

TwoSetPolicy::TwoSetPolicy(std::shared_ptr<const PolicyContext> ctx, bool fallback)
    : ctx_(std::move(ctx)), fallback_(fallback) {
  if (!fallback_ && !ctx_->certified)
    throw Error(ErrorCode::kPolicyUnavailable,
                "two-set needs a certified instance (" + ctx_->certification_note + ")");
}

void TwoSetPolicy::reset(int n_arms) {
  n_arms_ = n_arms;
  budget_ = budget_for(ctx_->inst, n_arms);
  beta_ = std::min(ctx_->inst.alpha(), 1.0 - ctx_->inst.alpha());
  state_ = TwoSetState{};
  state_.labels.assign(n_arms, ArmLabel::kNone);
  const int n_states = ctx_->inst.n_states();
  full_.assign(n_states, 0);
  prev_.assign(n_states, 0);
  quota_.assign(n_states, 0);
  remaining_.assign(n_arms, 0);
  if (!fallback_) {
    state_.pair = feasibility_pair_socp(ctx_->lp, ctx_->spectral, n_arms);
    state_.eps_rd = rounding_tolerance(state_.pair.eta, ctx_->spectral.lambda_u, n_states, n_arms);
    ol_ctx_.gram = *ctx_->spectral.u_mat;
    ol_ctx_.mu_star = ctx_->lp.mu_star;
    ol_ctx_.pair = state_.pair;
    ol_ctx_.eps_rd = state_.eps_rd;
    ol_ctx_.n_arms = n_arms;
  }
}

void TwoSetPolicy::set_pair(const FeasibilityPair& pair, double eps_rd) {
  state_.pair = pair;
  state_.eps_rd = eps_rd;
  ol_ctx_.pair = pair;
  ol_ctx_.eps_rd = eps_rd;
}

std::vector<int> TwoSetPolicy::internal_state() const {
  std::vector<int> out(state_.labels.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(state_.labels[i]);
  return out;
}

void TwoSetPolicy::set_internal_state(const std::vector<int>& v) {
  state_.labels.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) state_.labels[i] = static_cast<ArmLabel>(v[i]);
}

void TwoSetPolicy::select_ol(const ArmPopulation& pop) {
  const auto& st = pop.states();
  auto& labels = state_.labels;
  const OlTarget target = maximal_feasible_set(full_, prev_, ol_ctx_);
  state_.last_branch = target.branch;
  if (target.branch == OlBranch::kFull) {
    std::fill(labels.begin(), labels.end(), ArmLabel::kOl);
    return;
  }
  // Within each state: previous members first, then pibar-set arms, then the
  // rest; lowest ID within each class.
  quota_ = target.counts;
  std::vector<char>& chosen = remaining_;
  std::fill(chosen.begin(), chosen.end(), 0);
  for (ArmLabel cls : {ArmLabel::kOl, ArmLabel::kPibs, ArmLabel::kNone}) {
    for (int i = 0; i < n_arms_; ++i) {
      if (labels[i] != cls || chosen[i]) continue;
      int& q = quota_[st[i]];
      if (q > 0) {
        chosen[i] = 1;
        --q;
      }
    }
  }
  for (int i = 0; i < n_arms_; ++i) {
    if (chosen[i]) labels[i] = ArmLabel::kOl;
    else if (labels[i] == ArmLabel::kOl) labels[i] = ArmLabel::kNone;
  }
}

void TwoSetPolicy::select_pibs(int n_ol) {
  auto& labels = state_.labels;
  const int cap = static_cast<int>(std::floor(beta_ * (n_arms_ - n_ol) + 1e-9));
  int kept = 0;
  for (int i = 0; i < n_arms_; ++i) {
    if (labels[i] != ArmLabel::kPibs) continue;
    if (kept < cap) {
      ++kept;
    } else {
      labels[i] = ArmLabel::kNone;
      ++state_.retention_drops;
    }
  }
  for (int i = 0; i < n_arms_ && kept < cap; ++i) {
    if (labels[i] == ArmLabel::kNone) {
      labels[i] = ArmLabel::kPibs;
      ++kept;
    }
  }
}

void TwoSetPolicy::assign_actions(const ArmPopulation& pop, ChoiceSource& rng, Actions& actions, int n_ol) {
  const auto& st = pop.states();
  const auto& labels = state_.labels;
  const auto& lp = ctx_->lp;
  const int n_states = ctx_->inst.n_states();
  actions.assign(n_arms_, 0);

  auto activate = [&](ArmLabel cls, const std::vector<int>& per_state) {
    quota_ = per_state;
    for (int i = 0; i < n_arms_; ++i) {
      if (labels[i] != cls) continue;
      int& q = quota_[st[i]];
      if (q > 0) {
        actions[i] = 1;
        --q;
      }
    }
  };

  std::vector<int> z_ol(n_states, 0), z_pibs(n_states, 0);
  for (int i = 0; i < n_arms_; ++i) {
    if (labels[i] == ArmLabel::kOl) ++z_ol[st[i]];
    else if (labels[i] == ArmLabel::kPibs) ++z_pibs[st[i]];
  }
  if (n_ol > 0) activate(ArmLabel::kOl, optimal_local_control(z_ol, n_ol, ctx_->inst.alpha(), lp, rng).per_state);
  activate(ArmLabel::kPibs, unconstrained_optimal_control(z_pibs, lp, rng).per_state);

  for (int i = 0; i < n_arms_; ++i) {
    remaining_[i] = labels[i] == ArmLabel::kNone;
    if (remaining_[i]) actions[i] = rng.bernoulli(lp.pibar(st[i], 1)) ? 1 : 0;
  }
  rectify_budget(actions, remaining_, budget_);
}

void TwoSetPolicy::act(const ArmPopulation& pop, ChoiceSource& rng, Actions& actions) {
  const auto& st = pop.states();
  auto& labels = state_.labels;
  if (pop.n_arms() != n_arms_) throw Error(ErrorCode::kOutOfRange, "population size changed");

  std::fill(full_.begin(), full_.end(), 0);
  std::fill(prev_.begin(), prev_.end(), 0);
  for (int i = 0; i < n_arms_; ++i) {
    ++full_[st[i]];
    if (labels[i] == ArmLabel::kOl) ++prev_[st[i]];
  }
  if (!fallback_) select_ol(pop);

  int n_ol = 0;
  for (auto l : labels) n_ol += l == ArmLabel::kOl;
  select_pibs(n_ol);
  assign_actions(pop, rng, actions, n_ol);

  diag_.has_sets = true;
  diag_.m_ol = static_cast<double>(n_ol) / n_arms_;
  diag_.ol_full = n_ol == n_arms_;
}

}  // namespace rmab
