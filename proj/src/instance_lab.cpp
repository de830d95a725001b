#include "rmab/instance_lab.hpp"

#include <algorithm>
#include <cmath>

#include "rmab/error.hpp"
#include "rmab/feasibility.hpp"
#include "rmab/random.hpp"
#include "rmab/spectral.hpp"

namespace rmab {

namespace {

class Builder {
 public:
  Builder(int n) : n_(n), p_(static_cast<std::size_t>(n) * 2 * n, 0.0), r_(static_cast<std::size_t>(n) * 2, 0.0) {}
  double& p(int s, int a, int t) { return p_[(static_cast<std::size_t>(s) * 2 + a) * n_ + t]; }
  double& r(int s, int a) { return r_[static_cast<std::size_t>(s) * 2 + a]; }
  Instance build(const std::string& name, double alpha) { return Instance(name, n_, alpha, p_, r_); }

 private:
  int n_;
  std::vector<double> p_, r_;
};

// Ring where the preferred action drifts right with probability 0.1 and the
// other action falls back left with probability p_L(s).
Instance ring_instance(const std::string& name, int n, int last_preferred_active, double left_scale, double alpha) {
  Builder b(n);
  for (int s = 0; s < n; ++s) {
    const int pref = s <= last_preferred_active ? 1 : 0;
    b.p(s, pref, (s + 1) % n) += 0.1;
    b.p(s, pref, s) += 0.9;
    const double p_left = s <= 1 ? 1.0 : 0.5 - 0.1 * s / left_scale;
    b.p(s, 1 - pref, std::max(s - 1, 0)) += p_left;
    b.p(s, 1 - pref, s) += 1.0 - p_left;
  }
  b.r(7, 0) = 0.1;
  b.r(0, 1) = 1.0 / 300.0;
  return b.build(name, alpha);
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"attractor8", "conveyor13", "unstable3", "flip2", "split2", "bernoulli2"};
}

Instance builtin(const std::string& name) {
  if (name == "attractor8") return ring_instance(name, 8, 3, 8.0, 0.45);
  if (name == "conveyor13") return ring_instance(name, 13, 5, 12.0, 0.4);
  if (name == "unstable3") {
    const double p0[3][3] = {{0.02232142, 0.10229283, 0.87538575},
                             {0.03426605, 0.17175704, 0.79397691},
                             {0.52324756, 0.45523298, 0.02151947}};
    const double p1[3][3] = {{0.14874601, 0.30435809, 0.54689589},
                             {0.56845754, 0.41117331, 0.02036915},
                             {0.25265570, 0.27310439, 0.4742399}};
    const double r1[3] = {0.37401552, 0.11740814, 0.07866135};
    Builder b(3);
    for (int s = 0; s < 3; ++s) {
      for (int t = 0; t < 3; ++t) {
        b.p(s, 0, t) = p0[s][t];
        b.p(s, 1, t) = p1[s][t];
      }
      b.r(s, 1) = r1[s];
    }
    // The published rows carry 8 digits and miss 1 by up to 1e-8.
    for (int s = 0; s < 3; ++s) {
      for (int a = 0; a < 2; ++a) {
        double sum = 0.0;
        for (int t = 0; t < 3; ++t) sum += b.p(s, a, t);
        for (int t = 0; t < 3; ++t) b.p(s, a, t) /= sum;
      }
    }
    return b.build(name, 0.4);
  }
  if (name == "flip2") {
    Builder b(2);
    for (int a = 0; a < 2; ++a) {
      b.p(0, a, 1) = 1.0;
      b.p(1, a, 0) = 1.0;
    }
    b.r(0, 0) = 1.0;
    b.r(1, 1) = 1.0;
    return b.build(name, 0.5);
  }
  if (name == "split2") {
    Builder b(2);
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a) b.p(s, a, s) = 1.0;
    b.r(0, 1) = 1.0;
    b.r(1, 0) = 1.0;
    return b.build(name, 0.5);
  }
  if (name == "bernoulli2") {
    Builder b(2);
    for (int s = 0; s < 2; ++s)
      for (int a = 0; a < 2; ++a) b.p(s, a, 0) = b.p(s, a, 1) = 0.5;
    b.r(1, 1) = 1.0;
    return b.build(name, 0.5);
  }
  throw Error(ErrorCode::kUnknownName, "unknown builtin instance '" + name + "'");
}

InitialCondition builtin_initial_condition(const std::string& name) {
  if (name == "attractor8") return InitialCondition::uniform_over({4, 5, 6, 7});
  if (name == "conveyor13") return InitialCondition::uniform_over({6, 7, 8, 9, 10, 11});
  if (name == "flip2") return InitialCondition::all_in(0);
  return InitialCondition::stationary();
}

Instance random_uniform(int n_states, std::uint64_t seed, std::optional<double> alpha) {
  if (n_states < 2) throw Error(ErrorCode::kOutOfRange, "random instances need at least two states");
  RandomStream rng(derive_seed(seed, 0, kTagInstance));
  auto simplex = [&]() {
    std::vector<double> cuts(n_states - 1);
    for (double& c : cuts) c = rng.uniform();
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> out(n_states);
    double prev = 0.0;
    for (int i = 0; i < n_states - 1; ++i) {
      out[i] = cuts[i] - prev;
      prev = cuts[i];
    }
    out[n_states - 1] = 1.0 - prev;
    return out;
  };
  Builder b(n_states);
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < 2; ++a) {
      const auto row = simplex();
      for (int t = 0; t < n_states; ++t) b.p(s, a, t) = row[t];
    }
  }
  for (int a = 0; a < 2; ++a) {
    const auto col = simplex();
    for (int s = 0; s < n_states; ++s) b.r(s, a) = col[s];
  }
  const double grid_alpha = (1 + rng.below(9)) / 10.0;
  return b.build("random" + std::to_string(n_states) + "-seed" + std::to_string(seed), alpha.value_or(grid_alpha));
}

Certificate certify(const Instance& inst) {
  require_valid(inst);
  Certificate c;
  c.instance = inst.name();
  LpSolution lp;
  try {
    lp = solve_lp_relaxation(inst);
  } catch (const Error& e) {
    c.regular_unstable = TriState::kUnknown;
    c.unique_optimum = TriState::kUnknown;
    c.notes.push_back(std::string("LP relaxation failed: ") + e.what());
    return c;
  }
  c.unique_optimum = lp.unique_optimum;
  c.a2_nondegenerate = !lp.degenerate;
  c.neutral_state = lp.neutral_state;
  c.full_support = true;
  for (int s = 0; s < inst.n_states(); ++s)
    if (!(lp.mu_star(s) > 0.0)) c.full_support = false;
  c.all_positive_p = std::all_of(inst.transition_data().begin(), inst.transition_data().end(),
                                 [](double v) { return v > 0.0; });

  SpectralBundle sp;
  bool spectral_ok = true;
  try {
    sp = build_spectral_bundle(inst, lp);
  } catch (const Error& e) {
    spectral_ok = false;
    c.notes.push_back(std::string("spectral certification failed: ") + e.what());
  }
  if (spectral_ok) {
    c.a1_aperiodic_unichain = sp.a1_pass;
    c.eig_p = sp.eig_p;
    c.a3_local_stability = sp.a3_pass;
    c.eig_phi = sp.eig_phi;
    c.spectrum_condition = sp.phi_unstable;
    if (sp.w_mat) c.lambda_w = sp.lambda_w;
    if (sp.u_mat) c.lambda_u = sp.lambda_u;
    if (!sp.phi) c.notes.push_back("no unique neutral state, so the local dynamics matrix is undefined");
    if (sp.phi_boundary) c.notes.push_back("local dynamics has an eigenvalue on the unit circle");
  }
  if (c.a2_nondegenerate) {
    c.eta_closed_form = feasibility_pair_default(lp, 1).eta;
    if (spectral_ok && sp.u_mat) {
      try {
        c.eta_socp = feasibility_pair_socp(lp, sp, 1).eta;
      } catch (const Error& e) {
        c.notes.push_back(std::string("eta programs failed: ") + e.what());
      }
    }
  }

  // Regular instability: (a) unique optimum with full support, (b) the
  // spectrum condition, (c) only through the all-positive sufficient
  // condition; the noise constants are not estimated.
  const bool base = spectral_ok && c.a1_aperiodic_unichain && c.a2_nondegenerate && !c.a3_local_stability &&
                    c.full_support && c.spectrum_condition;
  if (!spectral_ok) {
    c.regular_unstable = TriState::kUnknown;
  } else if (!base || c.unique_optimum == TriState::kNo) {
    c.regular_unstable = TriState::kNo;
  } else if (c.unique_optimum == TriState::kUnknown || !c.all_positive_p) {
    c.regular_unstable = TriState::kUnknown;
    if (!c.all_positive_p) c.notes.push_back("noise condition not certified: some transition probabilities are zero");
    if (c.unique_optimum == TriState::kUnknown) c.notes.push_back("uniqueness of the LP optimum is inconclusive");
  } else {
    c.regular_unstable = TriState::kYes;
  }
  return c;
}

}  // namespace rmab
