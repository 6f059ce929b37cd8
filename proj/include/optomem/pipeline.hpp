#pragma once

#include <optional>

#include "optomem/fisher.hpp"
#include "optomem/lyapunov.hpp"
#include "optomem/models.hpp"
#include "optomem/output_field.hpp"

namespace optomem {

/// One solved cavity configuration: steady state, linearized dynamics and the
/// stationary covariance (dimensionless internal units).
struct CavitySolution {
  Model model = Model::TR;
  std::optional<SteadyStateTR> tr;
  std::optional<SteadyStateCC> cc;
  LinearSystem sys;
  StabilityReport stability;
  LyapunovSolution<Real> cov;   // valid only if stability.stable
  double nbar = 0.0;            // |alpha|^2 (TR), sum_j |alpha_j|^2 (CC)
  double omega_c_eff = 0.0;     // disordered cavity frequency (TR), omega_c (CC)

  /// Covariance block of the detected mode (TR: rows 0-1; CC: rows 4-5).
  RMat2 output_block() const;
};

/// Steady state + dynamical matrix + stability; covariance solved when stable.
CavitySolution solve_cavity(const SystemParams& p, const Disorder& d);

struct CovarianceHealth {
  double lyapunov_residual = 0.0;   // ||A s + s A^T + D||_F/||D||_F
  double min_symplectic_eig = 0.0;  // min eig of sigma + i Omega/2
  bool ill_conditioned = false;
};

/// Re-validates the Lyapunov residual and physicality sigma + i Omega/2 >= 0
/// (symplectic form entries: 1 for optical pairs, 2 for mechanical pairs in
/// zero-point units).
CovarianceHealth validate_covariance(const SystemParams& p, const CavitySolution& sol);

/// Everything the estimation theory needs at one point: the filtered output
/// covariance and its derivatives with respect to the dimensionless disorders
/// dq_i / x_zpf (Lyapunov-differentiation route, dA by central differences
/// through the full model pipeline).
struct InfoPoint {
  CavitySolution base;
  OutputCovariance sigma_out;
  RMat2 dsigma_out1 = RMat2::Zero();
  RMat2 dsigma_out2 = RMat2::Zero();
  InfoMatrices info;  // SI units (1/m^2 and m^2)
};

/// Full pipeline at one (params, disorder, detection) point.
/// Throws physics_error when the base point is unstable.
InfoPoint evaluate_point(const SystemParams& p, const Disorder& d,
                         const DetectionSettings& det);

/// Derivatives of the cavity covariance itself (model-sized matrices),
/// d sigma / d(dq_i/x_zpf); used by tests and by evaluate_point internally.
std::pair<RMat, RMat> covariance_derivatives(const SystemParams& p, const Disorder& d,
                                             const CavitySolution& base);

/// Variance of a single homodyne outcome k at the given configuration,
/// Var(k) = (1 - eta + 2 eta R^T sigma_out R)/(4 eta).
double homodyne_variance(const SystemParams& p, const Disorder& d,
                         const DetectionSettings& det);

/// FD step for dA/d(dq~) in dimensionless disorder units.
inline constexpr double kDisorderFdStep = 1e-6;

}  // namespace optomem
