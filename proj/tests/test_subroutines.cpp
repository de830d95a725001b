#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rmab/error.hpp"
#include "rmab/instance_lab.hpp"
#include "rmab/random.hpp"
#include "rmab/spectral.hpp"
#include "rmab/subroutines.hpp"

using namespace rmab;

TEST_CASE("randomized rounding") {
  RandomStream rng(1);
  for (int k = 0; k < 100; ++k) {
    CHECK(randomized_round(3.0, rng) == 3);
    CHECK(randomized_round(0.0, rng) == 0);
  }
  CHECK(randomized_round(0.45 * 100, rng) == 45);
  const int draws = 100000;
  double sum = 0.0;
  for (int k = 0; k < draws; ++k) {
    const int v = randomized_round(2.25, rng);
    CHECK((v == 2 || v == 3));
    sum += v;
  }
  const double sigma = std::sqrt(0.25 * 0.75 / draws);
  CHECK(std::abs(sum / draws - 2.25) < 3 * sigma);
}

TEST_CASE("unconstrained control follows pibar") {
  auto inst = builtin("unstable3");
  auto lp = solve_lp_relaxation(inst);
  RandomStream rng(2);
  auto plan = unconstrained_optimal_control({50, 60, 70}, lp, rng);
  CHECK(plan.per_state[0] == 50);
  CHECK(plan.per_state[2] == 0);
  CHECK(plan.per_state[1] >= 17);
  CHECK(plan.per_state[1] <= 18);
  CHECK(plan.budget == -1);
}

TEST_CASE("local control feasibility conditions") {
  auto inst = builtin("unstable3");
  auto lp = solve_lp_relaxation(inst);
  CHECK(check_olc_feasible({300, 338, 362}, 1000, 0.4, lp));
  CHECK_FALSE(check_olc_feasible({0, 0, 100}, 100, 0.4, lp));
  CHECK_FALSE(check_olc_feasible({100, 0, 0}, 100, 0.4, lp));
  CHECK_FALSE(check_olc_feasible({0, 0, 0}, 0, 0.4, lp));
}

TEST_CASE("local control arithmetic") {
  auto inst = builtin("unstable3");
  auto lp = solve_lp_relaxation(inst);
  RandomStream rng(3);
  auto plan = optimal_local_control({300, 338, 362}, 1000, 0.4, lp, rng);
  CHECK(plan.budget == 400);
  CHECK(plan.per_state[0] == 300);
  CHECK(plan.per_state[2] == 0);
  CHECK(plan.per_state[1] == 100);
  CHECK(plan.total() == 400);
  CHECK_THROWS_AS(optimal_local_control({0, 0, 100}, 100, 0.4, lp, rng), Error);
}

TEST_CASE("local control halves empty states") {
  // conveyor-like: states 0 and 1 never visited by the relaxation.
  auto inst = oracle::make_instance(
      4, 0.5,
      [](int s, int a, int t) {
        if (s <= 1) return t == 2 ? 1.0 : 0.0;
        if (a == 1) return t == 3 ? 0.7 : (t == 2 ? 0.3 : 0.0);
        return t == 2 ? 0.6 : (t == 3 ? 0.4 : 0.0);
      },
      [](int s, int a) { return s == 3 && a == 1 ? 1.0 : (s == 2 && a == 0 ? 0.2 : 0.0); });
  auto lp = solve_lp_relaxation(inst);
  REQUIRE(lp.partition.empty.size() == 2);
  REQUIRE(lp.neutral_state);
  RandomStream rng(4);
  double sum = 0.0;
  const int draws = 20000;
  int z_n = 200;
  for (int k = 0; k < draws; ++k) {
    std::vector<int> z = {5, 0, 0, 0};
    z[*lp.neutral_state] = z_n;
    for (int s : lp.partition.plus) z[s] = 10;
    int n = 0;
    for (int v : z) n += v;
    if (n % 2) {
      z[*lp.neutral_state] += 1;
      ++n;
    }
    auto plan = optimal_local_control(z, n, 0.5, lp, rng);
    CHECK((plan.per_state[0] == 2 || plan.per_state[0] == 3));
    sum += plan.per_state[0];
    CHECK(plan.total() == n / 2);
  }
  CHECK(std::abs(sum / draws - 2.5) < 3 * 0.5 / std::sqrt(draws));
}

namespace {

struct MeanCheck {
  Eigen::RowVectorXd mean, sd;
};

template <class PlanFn>
MeanCheck one_step_mean(const Instance& inst, const std::vector<int>& z, int reps, PlanFn plan_fn) {
  const int n = inst.n_states();
  int total = 0;
  for (int v : z) total += v;
  std::mt19937_64 gen(99);
  RandomStream rng(100);
  Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(n), sumsq = Eigen::RowVectorXd::Zero(n);
  for (int r = 0; r < reps; ++r) {
    auto next = oracle::sample_next_counts(inst, z, plan_fn(rng), gen);
    for (int s = 0; s < n; ++s) {
      const double x = static_cast<double>(next[s]) / total;
      sum(s) += x;
      sumsq(s) += x * x;
    }
  }
  MeanCheck out;
  out.mean = sum / reps;
  out.sd = ((sumsq / reps - out.mean.cwiseProduct(out.mean)).cwiseMax(0.0) / reps).cwiseSqrt();
  return out;
}

}  // namespace

TEST_CASE("one-step mean under the two subroutines") {
  auto inst = builtin("unstable3");
  auto lp = solve_lp_relaxation(inst);
  const std::vector<int> z = {64, 64, 72};
  Eigen::RowVectorXd x(3);
  x << 0.32, 0.32, 0.36;
  REQUIRE(check_olc_feasible(z, 200, 0.4, lp));

  auto uoc = one_step_mean(inst, z, 20000, [&](RandomStream& rng) {
    return unconstrained_optimal_control(z, lp, rng).per_state;
  });
  const Eigen::RowVectorXd target1 = x * induced_transition_matrix(inst, lp.pibar);
  for (int s = 0; s < 3; ++s) CHECK(std::abs(uoc.mean(s) - target1(s)) < 4 * uoc.sd(s) + 1e-12);

  auto olc = one_step_mean(inst, z, 20000, [&](RandomStream& rng) {
    return optimal_local_control(z, 200, 0.4, lp, rng).per_state;
  });
  const auto phi = build_phi(inst, lp, induced_transition_matrix(inst, lp.pibar));
  const Eigen::RowVectorXd target2 = lp.mu_star + (x - lp.mu_star) * phi;
  for (int s = 0; s < 3; ++s) CHECK(std::abs(olc.mean(s) - target2(s)) < 4 * olc.sd(s) + 1e-12);
}
