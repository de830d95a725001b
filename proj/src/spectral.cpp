#include "rmab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "rmab/error.hpp"

namespace rmab {

namespace {

using CMat = Eigen::MatrixXcd;
using cd = std::complex<double>;

double spectral_radius(const Eigen::MatrixXd& m) {
  const auto moduli = eigen_moduli(m);
  return moduli.empty() ? 0.0 : moduli.front();
}

// Swap diagonal entries k and k+1 of an upper-triangular t, keeping
// q t q^H fixed.
void swap_adjacent(CMat& t, CMat& q, int k) {
  const cd t11 = t(k, k), t22 = t(k + 1, k + 1), t12 = t(k, k + 1);
  Eigen::Vector2cd v(t12, t22 - t11);
  const double nv = v.norm();
  if (nv == 0.0) return;
  v /= nv;
  Eigen::Matrix2cd z;
  z << v(0), -std::conj(v(1)), v(1), std::conj(v(0));
  t.middleRows(k, 2) = z.adjoint() * t.middleRows(k, 2);
  t.middleCols(k, 2) = t.middleCols(k, 2) * z;
  q.middleCols(k, 2) = q.middleCols(k, 2) * z;
  t(k + 1, k) = 0.0;
}

}  // namespace

std::vector<double> eigen_moduli(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::kEigenFailure, "eigensolver failed");
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Eigen::MatrixXd induced_transition_matrix(const Instance& inst, const Eigen::MatrixXd& pibar) {
  const int n = inst.n_states();
  Eigen::MatrixXd p(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) p(s, t) = pibar(s, 0) * inst.p(s, 0, t) + pibar(s, 1) * inst.p(s, 1, t);
  return p;
}

SpectrumCheck check_aperiodic_unichain(const Eigen::MatrixXd& p_pibar) {
  SpectrumCheck out;
  out.moduli = eigen_moduli(p_pibar);
  const bool top_is_one = !out.moduli.empty() && std::abs(out.moduli[0] - 1.0) <= kModulusBand;
  const bool rest_inside = out.moduli.size() < 2 || out.moduli[1] <= 1.0 - kModulusBand;
  out.pass = top_is_one && rest_inside;
  for (std::size_t i = 1; i < out.moduli.size(); ++i)
    if (std::abs(out.moduli[i] - 1.0) <= kModulusBand) out.boundary = true;
  return out;
}

Eigen::MatrixXd build_phi(const Instance& inst, const LpSolution& lp, const Eigen::MatrixXd& p_pibar) {
  if (!lp.neutral_state) throw Error(ErrorCode::kDegenerate, "no unique neutral state");
  const int n = inst.n_states();
  const int sn = *lp.neutral_state;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd c = lp.pibar.col(1);
  Eigen::RowVectorXd dp(n);
  for (int t = 0; t < n; ++t) dp(t) = inst.p(sn, 1, t) - inst.p(sn, 0, t);
  return p_pibar - ones * lp.mu_star - (c - inst.alpha() * ones) * dp;
}

SpectrumCheck check_local_stability(const Eigen::MatrixXd& phi) {
  SpectrumCheck out;
  out.moduli = eigen_moduli(phi);
  out.pass = out.moduli.empty() || out.moduli.front() <= 1.0 - kModulusBand;
  for (double v : out.moduli)
    if (std::abs(v - 1.0) <= kModulusBand) out.boundary = true;
  return out;
}

Eigen::MatrixXd discounted_gram(const Eigen::MatrixXd& m) {
  return discounted_gram(m, Eigen::MatrixXd::Identity(m.rows(), m.cols()));
}

Eigen::MatrixXd discounted_gram(const Eigen::MatrixXd& m, const Eigen::MatrixXd& q) {
  if (spectral_radius(m) >= 1.0 - kModulusBand)
    throw Error(ErrorCode::kSpectralRadiusTooLarge, "Lyapunov series does not converge");
  Eigen::MatrixXd g = q;
  Eigen::MatrixXd a = m;
  for (int iter = 0; iter < 200; ++iter) {
    const double residual = (g - q - m * g * m.transpose()).cwiseAbs().maxCoeff();
    if (residual <= 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff())) break;
    g += a * g * a.transpose();
    a = a * a;
  }
  return 0.5 * (g + g.transpose());
}

double weighted_norm(const Eigen::RowVectorXd& v, const Eigen::MatrixXd& g) {
  if (v.size() != g.rows() || g.rows() != g.cols())
    throw Error(ErrorCode::kOutOfRange, "weighted norm dimension mismatch");
  const double sq = v * g * v.transpose();
  if (sq < -1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()) * v.squaredNorm())
    throw Error(ErrorCode::kNumericalFailure, "Gram matrix is not positive semidefinite");
  return std::sqrt(std::max(sq, 0.0));
}

double top_symmetric_eigenvalue(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::kEigenFailure, "symmetric eigensolver failed");
  return es.eigenvalues().maxCoeff();
}

UnstableSplit unstable_grams(const Eigen::MatrixXd& phi) {
  const int n = static_cast<int>(phi.rows());
  Eigen::ComplexSchur<CMat> schur(phi.cast<cd>());
  if (schur.info() != Eigen::Success) throw Error(ErrorCode::kEigenFailure, "Schur decomposition failed");
  CMat t = schur.matrixT();
  CMat q = schur.matrixU();

  for (int i = 0; i < n; ++i)
    if (std::abs(std::abs(t(i, i)) - 1.0) <= kModulusBand)
      throw Error(ErrorCode::kBoundaryEigenvalue, "eigenvalue modulus on the unit circle");

  // Bubble the unstable eigenvalues to the leading block.
  for (int pass = 0; pass < n; ++pass) {
    bool moved = false;
    for (int k = 0; k + 1 < n; ++k) {
      if (std::abs(t(k, k)) < 1.0 && std::abs(t(k + 1, k + 1)) > 1.0) {
        swap_adjacent(t, q, k);
        moved = true;
      }
    }
    if (!moved) break;
  }
  int p = 0;
  while (p < n && std::abs(t(p, p)) > 1.0) ++p;
  if (p == 0) throw Error(ErrorCode::kOutOfRange, "no eigenvalue outside the unit circle");
  const int r = n - p;

  // Block-diagonalize: T11 X - X T22 = -T12.
  CMat x = CMat::Zero(p, r);
  if (r > 0) {
    const CMat t11 = t.topLeftCorner(p, p);
    const CMat t22 = t.bottomRightCorner(r, r);
    const CMat t12 = t.topRightCorner(p, r);
    const CMat kron = Eigen::kroneckerProduct(CMat::Identity(r, r), t11).eval() -
                      Eigen::kroneckerProduct(t22.transpose(), CMat::Identity(p, p)).eval();
    const Eigen::VectorXcd rhs = -Eigen::Map<const Eigen::VectorXcd>(t12.data(), p * r);
    const Eigen::VectorXcd sol = kron.fullPivLu().solve(rhs);
    x = Eigen::Map<const CMat>(sol.data(), p, r);
  }
  CMat s = CMat::Identity(n, n);
  s.topRightCorner(p, r) = x;
  CMat s_inv = CMat::Identity(n, n);
  s_inv.topRightCorner(p, r) = -x;
  const CMat left = q * s;
  const CMat right = s_inv * q.adjoint();

  CMat inner_us = CMat::Zero(n, n);
  inner_us.topLeftCorner(p, p) = t.topLeftCorner(p, p).inverse();
  CMat id_us = CMat::Zero(n, n);
  id_us.topLeftCorner(p, p).setIdentity();

  UnstableSplit out;
  const Eigen::MatrixXd m_us = (left * inner_us * right).real();
  out.proj_us = (left * id_us * right).real();
  out.proj_st = Eigen::MatrixXd::Identity(n, n) - out.proj_us;

  const Eigen::MatrixXd g_us = discounted_gram(m_us);
  out.u_us = m_us * g_us * m_us.transpose();
  out.u_us = 0.5 * (out.u_us + out.u_us.transpose());
  const Eigen::MatrixXd phi_st = phi * out.proj_st;
  out.u_st = discounted_gram(phi_st, out.proj_st * out.proj_st.transpose());
  return out;
}

SpectralBundle build_spectral_bundle(const Instance& inst, const LpSolution& lp) {
  SpectralBundle b;
  const int n = inst.n_states();
  b.p_pibar = induced_transition_matrix(inst, lp.pibar);
  const SpectrumCheck a1 = check_aperiodic_unichain(b.p_pibar);
  b.eig_p = a1.moduli;
  b.a1_pass = a1.pass;
  if (b.a1_pass) {
    const Eigen::MatrixXd m = b.p_pibar - Eigen::VectorXd::Ones(n) * lp.mu_star;
    b.w_mat = discounted_gram(m);
    b.lambda_w = top_symmetric_eigenvalue(*b.w_mat);
    b.rho_w = 1.0 - 1.0 / (2.0 * b.lambda_w);
  }
  if (lp.neutral_state) {
    b.phi = build_phi(inst, lp, b.p_pibar);
    const SpectrumCheck a3 = check_local_stability(*b.phi);
    b.eig_phi = a3.moduli;
    b.a3_pass = a3.pass;
    b.phi_boundary = a3.boundary;
    b.phi_unstable = !a3.boundary && !a3.moduli.empty() && a3.moduli.front() > 1.0 + kModulusBand;
    if (b.a3_pass) {
      b.u_mat = discounted_gram(*b.phi);
      b.lambda_u = top_symmetric_eigenvalue(*b.u_mat);
      b.rho_u = 1.0 - 1.0 / (2.0 * b.lambda_u);
    }
    if (b.phi_unstable) {
      b.split = unstable_grams(*b.phi);
      b.lambda_us = top_symmetric_eigenvalue(b.split->u_us);
      b.lambda_st = top_symmetric_eigenvalue(b.split->u_st);
    }
  }
  return b;
}

}  // namespace rmab
