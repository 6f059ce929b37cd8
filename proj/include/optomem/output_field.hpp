#pragma once

#include <Eigen/Dense>

#include "optomem/models.hpp"
#include "optomem/params.hpp"

namespace optomem {

using RMat2 = Eigen::Matrix<Real, 2, 2>;

/// Filtered output-mode correlation matrix.
struct OutputCovariance {
  RMat2 sigma = RMat2::Zero();
  double filter_freq = 0.0;     // Omega_l, rad/s
  double detection_window = 0.0;  // tau, s
  CovarianceMode mode = CovarianceMode::Verbatim;

  Eigen::Matrix2d as_double() const { return sigma.cast<double>(); }
};

/// Output filter map sigma_cavity -> sigma_out for a detection window tau and
/// filter frequency Omega_l. Verbatim evaluates the printed expressions; the
/// vacuum-consistent variant replaces sigma by sigma - I/2 inside the brackets
/// so an empty cavity emits vacuum. Both add the +1/2 floor.
OutputCovariance output_covariance(const RMat2& sigma_block, double kappa_out, double tau,
                                   double omega_l, CovarianceMode mode);

/// Derivative of the filter map: linear part only (the vacuum floor and the
/// bracket offset are constant in the disorder).
RMat2 output_covariance_derivative(const RMat2& dsigma_block, double kappa_out, double tau,
                                   double omega_l);

/// Gaussian Wigner density W(x,y) of the output mode at a phase-space point.
double wigner_at(const Eigen::Matrix2d& sigma_out, double x, double y);

}  // namespace optomem
