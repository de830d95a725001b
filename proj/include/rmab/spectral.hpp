#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rmab/instance.hpp"
#include "rmab/lp_relaxation.hpp"

namespace rmab {

inline constexpr double kModulusBand = 1e-8;

// Eigenvalue moduli sorted in decreasing order.
std::vector<double> eigen_moduli(const Eigen::MatrixXd& m);

Eigen::MatrixXd induced_transition_matrix(const Instance& inst, const Eigen::MatrixXd& pibar);

struct SpectrumCheck {
  bool pass = false;
  std::vector<double> moduli;
  bool boundary = false;  // some modulus within kModulusBand of 1
};

SpectrumCheck check_aperiodic_unichain(const Eigen::MatrixXd& p_pibar);

// Linear map of the expected count dynamics under local control around mu*.
// Throws kDegenerate without a neutral state.
Eigen::MatrixXd build_phi(const Instance& inst, const LpSolution& lp,
                          const Eigen::MatrixXd& p_pibar);

SpectrumCheck check_local_stability(const Eigen::MatrixXd& phi);

// Solves G = Q + m G m^T by doubling; Q defaults to the identity.
Eigen::MatrixXd discounted_gram(const Eigen::MatrixXd& m);
Eigen::MatrixXd discounted_gram(const Eigen::MatrixXd& m, const Eigen::MatrixXd& q);

double weighted_norm(const Eigen::RowVectorXd& v, const Eigen::MatrixXd& g);

struct UnstableSplit {
  Eigen::MatrixXd u_us;
  Eigen::MatrixXd u_st;
  Eigen::MatrixXd proj_us;  // spectral projector onto the unstable part
  Eigen::MatrixXd proj_st;
};

// Gram matrices of the unstable and stable invariant parts of phi. The split
// comes from a reordered complex Schur form, then a block-diagonalizing
// Sylvester solve.
UnstableSplit unstable_grams(const Eigen::MatrixXd& phi);

struct SpectralBundle {
  Eigen::MatrixXd p_pibar;
  std::vector<double> eig_p;
  bool a1_pass = false;

  std::optional<Eigen::MatrixXd> phi;
  std::vector<double> eig_phi;
  bool a3_pass = false;
  bool phi_boundary = false;
  bool phi_unstable = false;  // some modulus > 1 and none on the boundary

  std::optional<Eigen::MatrixXd> w_mat, u_mat;
  double lambda_w = 0.0, lambda_u = 0.0, rho_w = 0.0, rho_u = 0.0;

  std::optional<UnstableSplit> split;
  double lambda_us = 0.0, lambda_st = 0.0;
};

SpectralBundle build_spectral_bundle(const Instance& inst, const LpSolution& lp);

double top_symmetric_eigenvalue(const Eigen::MatrixXd& g);

}  // namespace rmab
