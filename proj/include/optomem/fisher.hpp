#pragma once

#include <Eigen/Dense>

#include "optomem/output_field.hpp"

namespace optomem {

/// Weyl-transform coefficients of the two SLD operators:
/// L^i(x,y) = R^T Phi^i R - nu^i.
struct SldPhaseSpace {
  RMat2 phi1 = RMat2::Zero();
  RMat2 phi2 = RMat2::Zero();
  Real nu1 = 0, nu2 = 0;
};

/// Phi^i = -d(sigma^-1)/d dq_i / 2 = sigma^-1 (d sigma) sigma^-1 / 2,
/// nu^i = Tr[Phi^i sigma].
SldPhaseSpace sld_phase_space(const RMat2& sigma_out, const RMat2& dsigma1,
                              const RMat2& dsigma2);

/// Quantum Fisher information matrix from the phase-space SLD:
/// H_ij = 3 Tr[Phi^i s Phi^j s] - nu^i nu^j
///        + (det s - 1/2)(Phi^i_11 Phi^j_22 + Phi^j_11 Phi^i_22 - 2 Phi^i_12 Phi^j_12).
/// Units follow the derivatives (per dimensionless disorder here).
Eigen::Matrix2d qfim(const RMat2& sigma_out, const RMat2& dsigma1, const RMat2& dsigma2);

/// BHD classical Fisher information matrix, closed form:
/// F_ij = 2 eta^2 (R^T d_i s R)(R^T d_j s R) / (1 - eta + 2 eta R^T s R)^2,
/// R = (cos theta, sin theta). Rank <= 1 by construction.
Eigen::Matrix2d cfim(const RMat2& sigma_out, const RMat2& dsigma1, const RMat2& dsigma2,
                     double theta, double eta);

/// Trace-norm distance d = ||H - F||_1 (sum of |eigenvalues|, symmetric input).
double info_distance(const Eigen::Matrix2d& h, const Eigen::Matrix2d& f);

/// Rank-aware bound bundle for one (model, disorder, detection) point.
struct InfoMatrices {
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();       // QFIM, 1/m^2
  Eigen::Matrix2d f = Eigen::Matrix2d::Zero();       // CFIM, 1/m^2
  Eigen::Matrix2d h_pinv = Eigen::Matrix2d::Zero();  // Moore-Penrose, m^2
  Eigen::Matrix2d f_pinv = Eigen::Matrix2d::Zero();
  int rank_h = 0;
  int rank_f = 0;
  double d = 0.0;                                    // ||H - F||_1, 1/m^2
  // Single-parameter variance bounds 1/H_ii, 1/F_ii (other parameter known).
  Eigen::Vector2d h_single = Eigen::Vector2d::Zero();
  Eigen::Vector2d f_single = Eigen::Vector2d::Zero();

  static InfoMatrices assemble(const Eigen::Matrix2d& h_si, const Eigen::Matrix2d& f_si);
};

/// Moore-Penrose pseudo-inverse of a symmetric 2x2, rank counted against
/// tol = 1e-12 * max|eig|.
Eigen::Matrix2d pseudo_inverse(const Eigen::Matrix2d& m, int* rank = nullptr);

}  // namespace optomem
