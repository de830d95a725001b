#include "rmab/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmab/error.hpp"
#include "rmab/qp.hpp"

namespace rmab {

const char* to_string(PairSource p) {
  switch (p) {
    case PairSource::kClosedForm: return "closed-form";
    case PairSource::kSocp: return "socp";
    case PairSource::kFallbackReset: return "fallback-reset";
  }
  return "unknown";
}

const char* to_string(OlBranch b) {
  switch (b) {
    case OlBranch::kFull: return "full";
    case OlBranch::kSuperset: return "superset";
    case OlBranch::kKeepPrevious: return "keep-previous";
    case OlBranch::kShrinkGrow: return "shrink-grow";
  }
  return "unknown";
}

FeasibilityPair feasibility_pair_default(const LpSolution& lp, int n_arms) {
  if (!lp.neutral_state) throw Error(ErrorCode::kDegenerate, "no unique neutral state");
  const int s = *lp.neutral_state;
  const double root = std::sqrt(static_cast<double>(lp.y.rows()));
  FeasibilityPair pair;
  pair.eta = std::min(lp.y(s, 0), lp.y(s, 1)) / root;
  pair.eps_fe = (static_cast<double>(lp.partition.empty.size()) + 1.0) / (root * n_arms);
  pair.provenance = PairSource::kClosedForm;
  return pair;
}

EtaPrograms solve_eta_programs(const LpSolution& lp, const Eigen::MatrixXd& u) {
  if (!lp.neutral_state) throw Error(ErrorCode::kDegenerate, "no unique neutral state");
  const int n = static_cast<int>(lp.y.rows());
  const int sn = *lp.neutral_state;
  const double alpha = lp.alpha;
  EtaPrograms out;
  for (int which = 0; which < 2; ++which) {
    const int action = which == 0 ? 1 : 0;
    const double need = which == 0 ? alpha : 1.0 - alpha;
    Eigen::RowVectorXd c = lp.pibar.col(action).transpose();
    c(sn) = 0.0;
    Eigen::Index best = 0;
    if (c.maxCoeff(&best) < need) continue;

    QpProblem qp;
    qp.h = u;
    qp.g = -(u * lp.mu_star.transpose());
    qp.a_eq = Eigen::RowVectorXd::Ones(n);
    qp.b_eq = Eigen::VectorXd::Ones(1);
    qp.a_in.resize(n + 1, n);
    qp.a_in.row(0) = c;
    qp.a_in.bottomRows(n).setIdentity();
    qp.b_in = Eigen::VectorXd::Zero(n + 1);
    qp.b_in(0) = need;
    Eigen::VectorXd start = Eigen::VectorXd::Zero(n);
    start(best) = 1.0;
    const QpResult res = solve_qp(qp, start);
    const Eigen::RowVectorXd d = res.z.transpose() - lp.mu_star;
    const double eta = weighted_norm(d, u);
    if (which == 0) {
      out.eta1 = eta;
      out.z1 = res.z;
    } else {
      out.eta2 = eta;
      out.z2 = res.z;
    }
  }
  return out;
}

FeasibilityPair feasibility_pair_socp(const LpSolution& lp, const SpectralBundle& spectral, int n_arms) {
  if (!lp.neutral_state) throw Error(ErrorCode::kDegenerate, "no unique neutral state");
  if (!spectral.u_mat) throw Error(ErrorCode::kSpectralRadiusTooLarge, "U is not defined");
  const FeasibilityPair closed = feasibility_pair_default(lp, n_arms);
  FeasibilityPair reset = closed;
  reset.provenance = PairSource::kFallbackReset;

  const EtaPrograms eta = solve_eta_programs(lp, *spectral.u_mat);
  if (!eta.eta1 && !eta.eta2) return reset;

  const double inf = std::numeric_limits<double>::infinity();
  FeasibilityPair pair;
  pair.eta = std::min(eta.eta1.value_or(inf), eta.eta2.value_or(inf));
  const double eps0 = (static_cast<double>(lp.partition.empty.size()) + 1.0) / n_arms;
  pair.eps_fe = 2.0 * std::sqrt(2.0) * std::sqrt(spectral.lambda_u) * eps0;
  pair.provenance = PairSource::kSocp;

  const int sn = *lp.neutral_state;
  const double alpha = lp.alpha;
  double pmax1 = 0.0, pmax0 = 0.0;
  for (int s = 0; s < lp.y.rows(); ++s) {
    if (s == sn) continue;
    pmax1 = std::max(pmax1, lp.pibar(s, 1));
    pmax0 = std::max(pmax0, lp.pibar(s, 0));
  }
  // An infeasible program only certifies its condition automatically when
  // the margin clears eps0; otherwise fall back to the closed-form pair.
  if (!eta.eta1 && (alpha - pmax1) * pair.eps_fe / pair.eta < eps0) return reset;
  if (!eta.eta2 && (1.0 - alpha - pmax0) * pair.eps_fe / pair.eta < eps0) return reset;
  return pair;
}

double slack(const Eigen::RowVectorXd& x, double mass, const FeasibilityPair& pair,
             const Eigen::RowVectorXd& mu_star, const Eigen::MatrixXd& u) {
  return pair.eta * mass - weighted_norm(x - mass * mu_star, u) - pair.eps_fe;
}

double slack(const StateCount& x, const FeasibilityPair& pair, const Eigen::RowVectorXd& mu_star,
             const Eigen::MatrixXd& u) {
  return slack(x.scaled(), x.mass(), pair, mu_star, u);
}

namespace {

struct SlackPoint {
  double m = 0.0;
  double s = 0.0;
  double slope = 0.0;  // a supergradient of the concave slack curve
  Eigen::VectorXd z;
};

SlackPoint evaluate(const SocpProblem& p, const Eigen::VectorXd& mu, double m) {
  SlackPoint pt;
  pt.m = m;
  const Eigen::VectorXd center = m * mu;
  const BoxSumResult r = min_box_sum(p.gram, center, p.lower, p.upper, m);
  pt.z = r.z;
  pt.s = p.eta * m - p.offset - r.norm;
  if (r.norm > 1e-14 && std::isfinite(r.nu)) {
    const double df = r.nu - mu.dot(p.gram * (r.z - center));
    pt.slope = p.eta - df / r.norm;
  } else {
    pt.slope = p.eta;
  }
  return pt;
}

}  // namespace

std::optional<SocpSolution> socp_solve(const SocpProblem& p) {
  const int n = static_cast<int>(p.lower.size());
  if (p.upper.size() != n || p.mu_star.size() != n || p.gram.rows() != n)
    throw Error(ErrorCode::kOutOfRange, "SOCP dimension mismatch");
  for (int i = 0; i < n; ++i)
    if (p.lower(i) > p.upper(i) + 1e-15) return std::nullopt;
  constexpr double kAccept = 1e-10;
  const Eigen::VectorXd mu = p.mu_star.transpose();
  const double lo_m = p.lower.sum();
  const double hi_m = p.upper.sum();

  // The slack curve is concave in m, and the largest feasible m is either
  // the top of the range or the right root. Newton from the right stays on
  // the infeasible side because every tangent lies above the curve.
  SlackPoint pt = evaluate(p, mu, hi_m);
  for (int iter = 0; iter < 200; ++iter) {
    if (pt.s >= -kAccept) return SocpSolution{pt.z, pt.m};
    if (pt.slope >= -1e-15) return std::nullopt;
    const double next = pt.m - pt.s / pt.slope;
    if (next < lo_m) {
      if (pt.m <= lo_m) return std::nullopt;
      const SlackPoint low = evaluate(p, mu, lo_m);
      if (low.s >= -kAccept) return SocpSolution{low.z, low.m};
      return std::nullopt;
    }
    if (pt.m - next <= 1e-15 * std::max(1.0, pt.m)) return std::nullopt;
    pt = evaluate(p, mu, next);
  }
  throw Error(ErrorCode::kSocpFailure, "slack root search did not converge");
}

double rounding_tolerance(double eta, double lambda_u, int n_states, int n_arms) {
  return (std::max(1.0, eta) + 2.0 * std::sqrt(lambda_u)) * n_states / n_arms;
}

namespace {

std::vector<int> round_down(const Eigen::VectorXd& z, int n_arms, const std::vector<int>& lo,
                            const std::vector<int>& hi) {
  std::vector<int> out(lo.size());
  for (std::size_t s = 0; s < lo.size(); ++s) {
    const int k = static_cast<int>(std::floor(z(s) * n_arms + 1e-9));
    out[s] = std::clamp(k, lo[s], hi[s]);
  }
  return out;
}

Eigen::VectorXd scaled(const std::vector<int>& c, int n_arms) {
  Eigen::VectorXd v(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) v(s) = static_cast<double>(c[s]) / n_arms;
  return v;
}

double count_slack(const std::vector<int>& c, const OlContext& ctx) {
  const Eigen::VectorXd x = scaled(c, ctx.n_arms);
  return slack(x.transpose(), x.sum(), ctx.pair, ctx.mu_star, ctx.gram);
}

int total(const std::vector<int>& c) {
  int t = 0;
  for (int v : c) t += v;
  return t;
}

}  // namespace

OlTarget maximal_feasible_set(const std::vector<int>& x_full, const std::vector<int>& x_prev,
                              const OlContext& ctx) {
  const int n = static_cast<int>(x_full.size());
  const std::vector<int> zeros(n, 0);
  OlTarget out;
  if (count_slack(x_full, ctx) >= 0.0) {
    out.counts = x_full;
    out.branch = OlBranch::kFull;
    return out;
  }
  SocpProblem p;
  p.gram = ctx.gram;
  p.mu_star = ctx.mu_star;
  p.eta = ctx.pair.eta;
  p.offset = ctx.pair.eps_fe + ctx.eps_rd;

  const bool prev_nonempty = total(x_prev) > 0;
  if (prev_nonempty && count_slack(x_prev, ctx) >= 0.0) {
    p.lower = scaled(x_prev, ctx.n_arms);
    p.upper = scaled(x_full, ctx.n_arms);
    const auto sol = socp_solve(p);
    if (!sol) {
      out.counts = x_prev;
      out.branch = OlBranch::kKeepPrevious;
    } else {
      out.counts = round_down(sol->z, ctx.n_arms, x_prev, x_full);
      out.branch = OlBranch::kSuperset;
    }
    return out;
  }

  out.branch = OlBranch::kShrinkGrow;
  out.temp_counts = zeros;
  if (prev_nonempty) {
    p.lower = Eigen::VectorXd::Zero(n);
    p.upper = scaled(x_prev, ctx.n_arms);
    if (const auto sol = socp_solve(p)) out.temp_counts = round_down(sol->z, ctx.n_arms, zeros, x_prev);
  }
  p.lower = scaled(out.temp_counts, ctx.n_arms);
  p.upper = scaled(x_full, ctx.n_arms);
  if (const auto sol = socp_solve(p))
    out.counts = round_down(sol->z, ctx.n_arms, out.temp_counts, x_full);
  else
    out.counts = out.temp_counts;
  return out;
}

}  // namespace rmab
