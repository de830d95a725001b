#include "rmab/qp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "rmab/error.hpp"

namespace rmab {

QpResult solve_qp(const QpProblem& p, const Eigen::VectorXd& start) {
  const int n = static_cast<int>(p.h.rows());
  const int me = static_cast<int>(p.a_eq.rows());
  const int mi = static_cast<int>(p.a_in.rows());
  Eigen::VectorXd z = start;

  // Working set: equality rows are always in; inequality rows tracked here.
  std::vector<int> work;
  std::vector<char> in_work(mi, 0);
  auto stacked = [&]() {
    Eigen::MatrixXd a(me + static_cast<int>(work.size()), n);
    if (me > 0) a.topRows(me) = p.a_eq;
    for (std::size_t k = 0; k < work.size(); ++k) a.row(me + k) = p.a_in.row(work[k]);
    return a;
  };
  // Seed with active inequalities that keep the rows independent.
  for (int i = 0; i < mi; ++i) {
    if (std::abs(p.a_in.row(i).dot(z) - p.b_in(i)) > 1e-12) continue;
    work.push_back(i);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(stacked());
    if (lu.rank() < me + static_cast<int>(work.size()))
      work.pop_back();
    else
      in_work[i] = 1;
  }

  const int max_iter = 50 * (n + mi + 1);
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::MatrixXd a = stacked();
    const int k = static_cast<int>(a.rows());
    const Eigen::VectorXd grad = p.h * z + p.g;
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
    kkt.topLeftCorner(n, n) = p.h;
    kkt.topRightCorner(n, k) = -a.transpose();
    kkt.bottomLeftCorner(k, n) = a;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + k);
    rhs.head(n) = -grad;
    const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    const Eigen::VectorXd step = sol.head(n);
    const double scale = 1.0 + z.cwiseAbs().maxCoeff();

    if (step.cwiseAbs().maxCoeff() <= 1e-13 * scale) {
      // Multipliers at the current point: grad = a' lambda.
      const Eigen::VectorXd lambda = sol.tail(k);
      int drop = -1;
      double most = -1e-11 * (1.0 + grad.cwiseAbs().maxCoeff());
      for (std::size_t w = 0; w < work.size(); ++w) {
        if (lambda(me + w) < most) {
          most = lambda(me + w);
          drop = static_cast<int>(w);
        }
      }
      if (drop < 0) {
        QpResult out;
        out.z = z;
        out.value = 0.5 * z.dot(p.h * z) + p.g.dot(z);
        out.iterations = iter;
        return out;
      }
      in_work[work[drop]] = 0;
      work.erase(work.begin() + drop);
      continue;
    }

    double alpha = 1.0;
    int block = -1;
    for (int i = 0; i < mi; ++i) {
      if (in_work[i]) continue;
      const double ap = p.a_in.row(i).dot(step);
      if (ap >= -1e-15) continue;
      const double room = std::max(p.a_in.row(i).dot(z) - p.b_in(i), 0.0);
      const double t = room / -ap;
      if (t < alpha) {
        alpha = t;
        block = i;
      }
    }
    z += alpha * step;
    if (block >= 0) {
      work.push_back(block);
      in_work[block] = 1;
    }
  }
  throw Error(ErrorCode::kSocpFailure, "active-set QP did not converge");
}

BoxSumResult min_box_sum(const Eigen::MatrixXd& gram, const Eigen::VectorXd& center,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double total) {
  const int n = static_cast<int>(center.size());
  BoxSumResult out;
  out.z = lo;
  double lo_sum = lo.sum(), hi_sum = hi.sum();

  std::vector<int> movable;
  for (int i = 0; i < n; ++i)
    if (hi(i) > lo(i)) movable.push_back(i);

  auto finish = [&](const Eigen::VectorXd& z) {
    const Eigen::VectorXd d = z - center;
    out.z = z;
    out.norm = std::sqrt(std::max(d.dot(gram * d), 0.0));
  };

  // Ends of the range: the feasible set is a single point.
  if (total >= hi_sum - 1e-15 || total <= lo_sum + 1e-15 || movable.empty()) {
    const bool at_top = total >= hi_sum - 1e-15;
    finish(at_top ? hi : lo);
    const Eigen::VectorXd g = gram * (out.z - center);
    double nu = 0.0;
    if (!movable.empty()) {
      nu = at_top ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
      for (int i : movable) nu = at_top ? std::max(nu, g(i)) : std::min(nu, g(i));
    }
    out.nu = nu;
    return out;
  }

  // Greedy feasible start; the last partially filled coordinate stays free.
  Eigen::VectorXd z = lo;
  double rem = total - lo_sum;
  int last = movable.front();
  for (int i : movable) {
    if (rem <= 0.0) break;
    const double add = std::min(hi(i) - lo(i), rem);
    z(i) += add;
    rem -= add;
    last = i;
  }
  // status: 0 free, -1 pinned at lo, +1 pinned at hi
  std::vector<int> status(n, -1);
  for (int i = 0; i < n; ++i) {
    if (hi(i) <= lo(i)) continue;
    if (z(i) <= lo(i)) status[i] = -1;
    else if (z(i) >= hi(i)) status[i] = 1;
    else status[i] = 0;
  }
  status[last] = 0;

  const int max_iter = 40 * n + 40;
  std::vector<int> free;
  for (int iter = 0; iter < max_iter; ++iter) {
    free.clear();
    for (int i = 0; i < n; ++i)
      if (status[i] == 0) free.push_back(i);
    const int f = static_cast<int>(free.size());
    const Eigen::VectorXd g = gram * (z - center);

    // [G_FF  -1][p]   [-g_F]
    // [ 1'    0][nu] = [ 0 ]
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(f + 1, f + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(f + 1);
    for (int a = 0; a < f; ++a) {
      for (int b = 0; b < f; ++b) kkt(a, b) = gram(free[a], free[b]);
      kkt(a, f) = -1.0;
      kkt(f, a) = 1.0;
      rhs(a) = -g(free[a]);
    }
    const Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
    const double nu = sol(f);
    double pmax = 0.0;
    for (int a = 0; a < f; ++a) pmax = std::max(pmax, std::abs(sol(a)));

    if (pmax <= 1e-14) {
      int release = -1;
      double most = -1e-13 * (1.0 + g.cwiseAbs().maxCoeff());
      for (int i = 0; i < n; ++i) {
        if (status[i] == 0 || hi(i) <= lo(i)) continue;
        const double lambda = status[i] < 0 ? g(i) - nu : nu - g(i);
        if (lambda < most) {
          most = lambda;
          release = i;
        }
      }
      if (release < 0) {
        finish(z);
        out.nu = nu;
        return out;
      }
      status[release] = 0;
      continue;
    }

    double step = 1.0;
    int block = -1, block_side = 0;
    for (int a = 0; a < f; ++a) {
      const int i = free[a];
      const double pi = sol(a);
      double t = std::numeric_limits<double>::infinity();
      int side = 0;
      if (pi < 0.0) {
        t = std::max(z(i) - lo(i), 0.0) / -pi;
        side = -1;
      } else if (pi > 0.0) {
        t = std::max(hi(i) - z(i), 0.0) / pi;
        side = 1;
      }
      if (t < step) {
        step = t;
        block = i;
        block_side = side;
      }
    }
    for (int a = 0; a < f; ++a) z(free[a]) += step * sol(a);
    if (block >= 0) {
      z(block) = block_side < 0 ? lo(block) : hi(block);
      status[block] = block_side;
    }
  }
  throw Error(ErrorCode::kSocpFailure, "box-constrained projection did not converge");
}

}  // namespace rmab
