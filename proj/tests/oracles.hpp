#pragma once

// Brute-force reference computations used only by the tests. They share no
// code with the library beyond the Instance container.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rmab/instance.hpp"

namespace oracle {

inline Eigen::MatrixXd matrix_from(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

inline rmab::Instance make_instance(int n, double alpha, const std::function<double(int, int, int)>& p,
                                    const std::function<double(int, int)>& r, const char* name = "test") {
  std::vector<double> tp, rw;
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < 2; ++a) {
      for (int t = 0; t < n; ++t) tp.push_back(p(s, a, t));
      rw.push_back(r(s, a));
    }
  return rmab::Instance(name, n, alpha, tp, rw);
}

struct LpVertex {
  double value = -1e300;
  std::vector<Eigen::VectorXd> optima;  // every optimal basic solution found
};

// Enumerates basic solutions of the relaxation's equality system over every
// column subset; feasible for |S| <= 4.
inline LpVertex lp_by_vertices(const rmab::Instance& inst) {
  const int n = inst.n_states();
  const int cols = 2 * n;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 2, cols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 2);
  Eigen::VectorXd c(cols);
  for (int s = 0; s < n; ++s)
    for (int act = 0; act < 2; ++act) {
      const int j = 2 * s + act;
      c(j) = inst.r(s, act);
      for (int t = 0; t < n; ++t) a(t, j) += inst.p(s, act, t);
      a(s, j) -= 1.0;
      a(n, j) = 1.0;
      a(n + 1, j) = act;
    }
  b(n) = 1.0;
  b(n + 1) = inst.alpha();
  LpVertex out;
  for (int mask = 1; mask < (1 << cols); ++mask) {
    std::vector<int> idx;
    for (int j = 0; j < cols; ++j)
      if (mask >> j & 1) idx.push_back(j);
    Eigen::MatrixXd sub(n + 2, idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(k) = a.col(idx[k]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
    if (qr.rank() != static_cast<int>(idx.size())) continue;
    Eigen::VectorXd yb = qr.solve(b);
    if ((sub * yb - b).cwiseAbs().maxCoeff() > 1e-10) continue;
    if (yb.minCoeff() < -1e-12) continue;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(cols);
    for (std::size_t k = 0; k < idx.size(); ++k) y(idx[k]) = std::max(0.0, yb(k));
    const double v = c.dot(y);
    if (v > out.value + 1e-10) {
      out.value = v;
      out.optima.clear();
    }
    if (v > out.value - 1e-10) {
      bool seen = false;
      for (const auto& o : out.optima) seen = seen || (o - y).cwiseAbs().maxCoeff() < 1e-9;
      if (!seen) out.optima.push_back(y);
    }
  }
  return out;
}

// sum_{k < terms} m^k (m^k)^T
inline Eigen::MatrixXd gram_series(const Eigen::MatrixXd& m, int terms = 200) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  Eigen::MatrixXd pk = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (int k = 0; k < terms; ++k) {
    g += pk * pk.transpose();
    pk = m * pk;
  }
  return g;
}

// Long-run gain of a stationary deterministic policy (bit s = action in s)
// with subsidy w for passivity. Needs an irreducible induced chain.
inline double policy_gain(const rmab::Instance& inst, unsigned policy, double w) {
  const int n = inst.n_states();
  Eigen::MatrixXd sys(n + 1, n);
  Eigen::VectorXd r(n);
  for (int s = 0; s < n; ++s) {
    const int act = policy >> s & 1;
    for (int t = 0; t < n; ++t) sys(t, s) = inst.p(s, act, t) - (s == t ? 1.0 : 0.0);
    r(s) = inst.r(s, act) + (act == 0 ? w : 0.0);
  }
  sys.row(n).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  const Eigen::VectorXd d = sys.colPivHouseholderQr().solve(rhs);
  return d.dot(r);
}

// Best deterministic policy at subsidy w by enumeration.
inline unsigned best_policy(const rmab::Instance& inst, double w) {
  unsigned best = 0;
  double best_gain = -1e300;
  for (unsigned pol = 0; pol < (1u << inst.n_states()); ++pol) {
    const double g = policy_gain(inst, pol, w);
    if (g > best_gain + 1e-13) {
      best_gain = g;
      best = pol;
    }
  }
  return best;
}

}  // namespace oracle

namespace oracle {

// eta m - ||x - m mu||_U - eps_fe for per-state counts d over n_arms arms.
inline double count_slack(const std::vector<int>& d, int n_arms, const Eigen::MatrixXd& u,
                          const Eigen::RowVectorXd& mu, double eta, double eps_fe) {
  Eigen::RowVectorXd x(d.size());
  for (std::size_t s = 0; s < d.size(); ++s) x(s) = static_cast<double>(d[s]) / n_arms;
  const double m = x.sum();
  const Eigen::RowVectorXd diff = x - m * mu;
  const double q = diff * u * diff.transpose();
  return eta * m - std::sqrt(std::max(q, 0.0)) - eps_fe;
}

// Largest arm count over integer vectors lo <= d <= hi with slack >= threshold;
// -1 when there is none.
inline int max_feasible_count(const std::vector<int>& lo, const std::vector<int>& hi, int n_arms,
                              const Eigen::MatrixXd& u, const Eigen::RowVectorXd& mu, double eta, double eps_fe,
                              double threshold) {
  int best = -1;
  std::vector<int> d = lo;
  const std::size_t n = lo.size();
  while (true) {
    int mass = 0;
    for (int v : d) mass += v;
    if (mass > best && count_slack(d, n_arms, u, mu, eta, eps_fe) >= threshold) best = mass;
    std::size_t k = 0;
    while (k < n && d[k] == hi[k]) {
      d[k] = lo[k];
      ++k;
    }
    if (k == n) break;
    ++d[k];
  }
  return best;
}

}  // namespace oracle

#include <random>

namespace oracle {

// One synchronous transition of a population given per-state counts and how
// many arms of each state are activated.
inline std::vector<int> sample_next_counts(const rmab::Instance& inst, const std::vector<int>& z,
                                           const std::vector<int>& active, std::mt19937_64& gen) {
  const int n = inst.n_states();
  std::vector<int> next(n, 0);
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < 2; ++a) {
      int k = a == 1 ? active[s] : z[s] - active[s];
      if (k == 0) continue;
      // multinomial by sequential binomials
      double left = 1.0;
      for (int t = 0; t < n && k > 0; ++t) {
        const double p = t == n - 1 ? 1.0 : std::clamp(inst.p(s, a, t) / left, 0.0, 1.0);
        const int draw = std::binomial_distribution<int>(k, p)(gen);
        next[t] += draw;
        k -= draw;
        left -= inst.p(s, a, t);
      }
    }
  return next;
}

}  // namespace oracle
