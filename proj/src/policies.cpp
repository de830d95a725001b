#include "rmab/policies.hpp"

#include <algorithm>
#include <numeric>

#include "rmab/error.hpp"
#include "rmab/two_set.hpp"

namespace rmab {

std::shared_ptr<const PolicyContext> make_context(const Instance& inst, bool with_whittle) {
  auto ctx = std::make_shared<PolicyContext>();
  ctx->inst = inst;
  ctx->lp = solve_lp_relaxation(inst);
  try {
    ctx->dual = solve_dual_lp(inst, ctx->lp);
  } catch (const Error&) {
    ctx->dual.reset();
  }
  ctx->spectral = build_spectral_bundle(inst, ctx->lp);
  const auto& sp = ctx->spectral;
  if (!sp.a1_pass) ctx->certification_note = "pibar chain is not an aperiodic unichain";
  else if (ctx->lp.degenerate) ctx->certification_note = "no unique neutral state";
  else if (!sp.a3_pass || !sp.u_mat) ctx->certification_note = "local dynamics are not stable";
  ctx->certified = sp.a1_pass && !ctx->lp.degenerate && sp.a3_pass && sp.u_mat.has_value();
  if (with_whittle) {
    try {
      ctx->whittle = whittle_index(inst);
    } catch (const Error& e) {
      WhittleTable t;
      t.indexable = false;
      t.note = e.what();
      ctx->whittle = t;
    }
  }
  return ctx;
}

void rectify_budget(Actions& actions, const std::vector<char>& eligible, int budget) {
  const int n = static_cast<int>(actions.size());
  int active = 0;
  for (int i = 0; i < n; ++i) active += actions[i];
  for (int i = n - 1; i >= 0 && active > budget; --i) {
    if (eligible[i] && actions[i]) {
      actions[i] = 0;
      --active;
    }
  }
  for (int i = n - 1; i >= 0 && active < budget; --i) {
    if (eligible[i] && !actions[i]) {
      actions[i] = 1;
      ++active;
    }
  }
  if (active != budget)
    throw Error(ErrorCode::kBudgetUnreachable,
                "cannot reach budget " + std::to_string(budget) + ", stuck at " + std::to_string(active));
}

PriorityPolicy::PriorityPolicy(std::string name, std::shared_ptr<const PolicyContext> ctx,
                               std::vector<double> index)
    : name_(std::move(name)), ctx_(std::move(ctx)) {
  order_.resize(index.size());
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return index[a] > index[b]; });
}

void PriorityPolicy::reset(int n_arms) {
  budget_ = budget_for(ctx_->inst, n_arms);
  counts_.assign(ctx_->inst.n_states(), 0);
  quota_.assign(ctx_->inst.n_states(), 0);
}

void PriorityPolicy::act(const ArmPopulation& pop, ChoiceSource&, Actions& actions) {
  const int n = pop.n_arms();
  const auto& st = pop.states();
  std::fill(counts_.begin(), counts_.end(), 0);
  for (int i = 0; i < n; ++i) ++counts_[st[i]];
  int left = budget_;
  for (int s : order_) {
    quota_[s] = std::min(left, counts_[s]);
    left -= quota_[s];
  }
  actions.resize(n);
  for (int i = 0; i < n; ++i) {
    int& q = quota_[st[i]];
    if (q > 0) {
      actions[i] = 1;
      --q;
    } else {
      actions[i] = 0;
    }
  }
}

void IdPolicy::reset(int n_arms) {
  budget_ = budget_for(ctx_->inst, n_arms);
  all_.assign(n_arms, 1);
}

void IdPolicy::act(const ArmPopulation& pop, ChoiceSource& rng, Actions& actions) {
  const int n = pop.n_arms();
  const auto& st = pop.states();
  actions.resize(n);
  for (int i = 0; i < n; ++i) actions[i] = rng.bernoulli(ctx_->lp.pibar(st[i], 1)) ? 1 : 0;
  rectify_budget(actions, all_, budget_);
}

std::vector<std::string> policy_names() { return {"two-set", "two-set-fallback", "lp-index", "id", "whittle"}; }

std::unique_ptr<Policy> make_policy(const std::string& name, std::shared_ptr<const PolicyContext> ctx) {
  if (name == "two-set") {
    const bool fallback = !ctx->certified;
    return std::make_unique<TwoSetPolicy>(std::move(ctx), fallback);
  }
  if (name == "two-set-fallback") return std::make_unique<TwoSetPolicy>(std::move(ctx), true);
  if (name == "id") return std::make_unique<IdPolicy>(std::move(ctx));
  if (name == "lp-index") {
    if (!ctx->dual) throw Error(ErrorCode::kPolicyUnavailable, "lp-index needs the dual solution");
    std::vector<double> index(ctx->inst.n_states());
    for (int s = 0; s < ctx->inst.n_states(); ++s) index[s] = ctx->dual->index(s);
    return std::make_unique<PriorityPolicy>("lp-index", std::move(ctx), std::move(index));
  }
  if (name == "whittle") {
    if (!ctx->whittle) throw Error(ErrorCode::kPolicyUnavailable, "whittle table was not computed");
    if (!ctx->whittle->indexable)
      throw Error(ErrorCode::kNotIndexable, "instance is not indexable: " + ctx->whittle->note);
    std::vector<double> index = ctx->whittle->index;
    return std::make_unique<PriorityPolicy>("whittle", std::move(ctx), std::move(index));
  }
  throw Error(ErrorCode::kUnknownName, "unknown policy '" + name + "'");
}

}  // namespace rmab
