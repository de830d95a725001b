#include "rmab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "rmab/error.hpp"
#include "rmab/parallel.hpp"

namespace rmab {

InitialCondition InitialCondition::all_in(int s) {
  InitialCondition c;
  c.kind = InitKind::kAllInState;
  c.state = s;
  return c;
}

InitialCondition InitialCondition::uniform_over(std::vector<int> states) {
  InitialCondition c;
  c.kind = InitKind::kUniformOver;
  c.support = std::move(states);
  return c;
}

InitialCondition InitialCondition::from_states(std::vector<int> states) {
  InitialCondition c;
  c.kind = InitKind::kExplicit;
  c.explicit_states = std::move(states);
  return c;
}

InitialCondition InitialCondition::stationary() { return InitialCondition{}; }

std::vector<int> initial_states(const InitialCondition& init, const LpSolution& lp, int n_arms,
                                RandomStream& rng) {
  const int n_states = static_cast<int>(lp.y.rows());
  auto check = [&](int s) {
    if (s < 0 || s >= n_states) throw Error(ErrorCode::kOutOfRange, "initial state " + std::to_string(s));
  };
  std::vector<int> out(n_arms);
  switch (init.kind) {
    case InitKind::kAllInState:
      check(init.state);
      std::fill(out.begin(), out.end(), init.state);
      break;
    case InitKind::kUniformOver:
      if (init.support.empty()) throw Error(ErrorCode::kOutOfRange, "empty initial support");
      for (int s : init.support) check(s);
      for (int i = 0; i < n_arms; ++i) out[i] = init.support[rng.below(static_cast<int>(init.support.size()))];
      break;
    case InitKind::kExplicit:
      if (static_cast<int>(init.explicit_states.size()) != n_arms)
        throw Error(ErrorCode::kOutOfRange, "explicit initial state has the wrong length");
      for (int s : init.explicit_states) check(s);
      out = init.explicit_states;
      break;
    case InitKind::kStationaryRounded: {
      // Largest-remainder rounding of N mu*.
      std::vector<int> counts(n_states);
      std::vector<std::pair<double, int>> rem;
      int used = 0;
      for (int s = 0; s < n_states; ++s) {
        const double target = n_arms * std::max(lp.mu_star(s), 0.0);
        counts[s] = static_cast<int>(std::floor(target));
        used += counts[s];
        rem.emplace_back(target - counts[s], s);
      }
      std::stable_sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first; });
      for (int k = 0; used < n_arms; ++k, ++used) ++counts[rem[k % n_states].second];
      int i = 0;
      for (int s = 0; s < n_states; ++s)
        for (int c = 0; c < counts[s]; ++c) out[i++] = s;
      break;
    }
  }
  return out;
}

long SimConfig::effective_burn_in() const {
  if (burn_in >= 0) return burn_in;
  return std::min<long>(10000, horizon / 10);
}

GapMetrics gap_metrics(double avg, double r_rel, int n_arms) {
  GapMetrics g;
  const double rel = 1.0 - avg / r_rel;
  g.gap_ratio = n_arms * rel;
  g.log_gap_ratio = std::log10(std::max(rel, 1e-300));
  return g;
}

double t_interval_half_width(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1));
  boost::math::students_t dist(static_cast<double>(n - 1));
  return boost::math::quantile(dist, 0.975) * sd / std::sqrt(static_cast<double>(n));
}

ReplicationResult run_replication(const PolicyContext& ctx, const Policy& proto, const SimConfig& cfg, int rep) {
  const Instance& inst = ctx.inst;
  const int n = cfg.n_arms;
  const int n_states = inst.n_states();
  const int budget = budget_for(inst, n);
  const long horizon = cfg.horizon;
  const long burn = cfg.effective_burn_in();
  if (burn >= horizon) throw Error(ErrorCode::kOutOfRange, "burn-in must be shorter than the horizon");

  RandomStream init_rng(derive_seed(cfg.master_seed, rep, kTagInitialState));
  RandomStream move_rng(derive_seed(cfg.master_seed, rep, kTagTransitions));
  RandomStream policy_rng(derive_seed(cfg.master_seed, rep, kTagPolicy));

  std::unique_ptr<Policy> policy = proto.clone();
  policy->reset(n);
  ArmPopulation pop(n_states, initial_states(cfg.init, ctx.lp, n, init_rng));
  std::vector<int>& st = pop.mutable_states();

  // cum[(s*2+a)*S + t] = P(s,a,0..t); only the first S-1 entries are compared.
  std::vector<double> cum(static_cast<std::size_t>(n_states) * 2 * n_states);
  std::vector<double> reward(static_cast<std::size_t>(n_states) * 2);
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < 2; ++a) {
      double acc = 0.0;
      for (int t = 0; t < n_states; ++t) {
        acc += inst.p(s, a, t);
        cum[(s * 2 + a) * n_states + t] = acc;
      }
      cum[(s * 2 + a) * n_states + n_states - 1] = 1.0;
      reward[s * 2 + a] = inst.r(s, a);
    }
  }

  const bool diag = cfg.diagnostics;
  const Eigen::MatrixXd* gram = ctx.spectral.u_mat ? &*ctx.spectral.u_mat : nullptr;
  ReplicationResult out;
  if (diag && cfg.record_series && rep == 0) out.series.emplace();
  Eigen::RowVectorXd x(n_states);
  std::vector<int> sa(static_cast<std::size_t>(n_states) * 2);

  Actions actions(n);
  double reward_sum = 0.0;
  double d_ic_sum = 0.0, h_u_sum = 0.0, m_ol_sum = 0.0, full_sum = 0.0;
  for (long t = 0; t < horizon; ++t) {
    policy->act(pop, policy_rng, actions);
    const bool record = t >= burn;

    if (diag && record) {
      std::fill(sa.begin(), sa.end(), 0);
      for (int i = 0; i < n; ++i) ++sa[st[i] * 2 + actions[i]];
      long wrong = 0;
      for (int s : ctx.lp.partition.plus) wrong += sa[s * 2];
      for (int s : ctx.lp.partition.minus) wrong += sa[s * 2 + 1];
      const double dic = static_cast<double>(wrong) / n;
      double hu = std::nan("");
      if (gram) {
        for (int s = 0; s < n_states; ++s) x(s) = static_cast<double>(sa[s * 2] + sa[s * 2 + 1]) / n;
        hu = weighted_norm(x - ctx.lp.mu_star, *gram);
      }
      const StepDiagnostics sd = policy->diagnostics();
      d_ic_sum += dic;
      h_u_sum += hu;
      m_ol_sum += sd.m_ol;
      full_sum += sd.ol_full ? 1.0 : 0.0;
      if (out.series) {
        out.series->d_ic.push_back(dic);
        out.series->h_u.push_back(hu);
        out.series->m_ol.push_back(sd.m_ol);
        out.series->ol_full.push_back(sd.ol_full ? 1 : 0);
      }
    }

    long active = 0;
    double step_reward = 0.0;
    for (int i = 0; i < n; ++i) {
      const int a = actions[i];
      const int idx = st[i] * 2 + a;
      active += a;
      step_reward += reward[idx];
      const double u = move_rng.uniform();
      const double* row = &cum[static_cast<std::size_t>(idx) * n_states];
      int next = 0;
      for (int k = 0; k < n_states - 1; ++k) next += u >= row[k];
      st[i] = next;
    }
    if (active != budget)
      throw Error(ErrorCode::kBudgetUnreachable, "policy " + proto.name() + " activated " +
                                                     std::to_string(active) + " arms, budget " +
                                                     std::to_string(budget) + " at step " + std::to_string(t));
    if (record) reward_sum += step_reward / n;
  }
  const double steps = static_cast<double>(horizon - burn);
  out.avg_reward = reward_sum / steps;
  if (diag) {
    out.d_ic_avg = d_ic_sum / steps;
    out.h_u_avg = h_u_sum / steps;
    out.m_ol_avg = m_ol_sum / steps;
    out.frac_ol_full = full_sum / steps;
  }
  return out;
}

TrajectoryStats summarize(const PolicyContext& ctx, const std::string& policy, const SimConfig& cfg,
                          const std::vector<ReplicationResult>& reps) {
  TrajectoryStats st;
  st.instance = ctx.inst.name();
  st.policy = policy;
  st.n_arms = cfg.n_arms;
  st.horizon = cfg.horizon;
  st.replications = static_cast<int>(reps.size());
  st.seed = cfg.master_seed;
  st.r_rel = ctx.lp.r_rel;
  for (const auto& r : reps) st.replication_rewards.push_back(r.avg_reward);
  const double k = static_cast<double>(reps.size());
  st.avg_reward = std::accumulate(st.replication_rewards.begin(), st.replication_rewards.end(), 0.0) / k;
  if (reps.size() > 1) {
    double ss = 0.0;
    for (double v : st.replication_rewards) ss += (v - st.avg_reward) * (v - st.avg_reward);
    st.reward_sd = std::sqrt(ss / (k - 1));
  }
  st.ci_half = t_interval_half_width(st.replication_rewards);
  st.gap_defined = st.r_rel > 0.0;
  if (st.gap_defined) {
    const GapMetrics g = gap_metrics(st.avg_reward, st.r_rel, cfg.n_arms);
    st.gap_ratio = g.gap_ratio;
    st.log_gap_ratio = g.log_gap_ratio;
    st.above_relaxation = st.avg_reward > st.r_rel;
  }
  if (cfg.diagnostics) {
    st.has_diagnostics = true;
    st.has_sets = policy.rfind("two-set", 0) == 0;
    for (const auto& r : reps) {
      st.d_ic_avg += r.d_ic_avg / k;
      st.h_u_avg += r.h_u_avg / k;
      st.m_ol_avg += r.m_ol_avg / k;
      st.frac_ol_full += r.frac_ol_full / k;
    }
    if (!reps.empty() && reps.front().series) st.series = reps.front().series;
  }
  return st;
}

TrajectoryStats simulate(std::shared_ptr<const PolicyContext> ctx, const std::string& policy,
                         const SimConfig& cfg) {
  if (cfg.replications < 1) throw Error(ErrorCode::kOutOfRange, "need at least one replication");
  budget_for(ctx->inst, cfg.n_arms);
  const std::unique_ptr<Policy> proto = make_policy(policy, ctx);
  std::vector<ReplicationResult> reps(cfg.replications);
  parallel_for(reps.size(), [&](std::size_t r) { reps[r] = run_replication(*ctx, *proto, cfg, static_cast<int>(r)); });
  return summarize(*ctx, policy, cfg, reps);
}

}  // namespace rmab
