#include "optomem/output_field.hpp"

#include <cmath>

#include "optomem/constants.hpp"
#include "optomem/errors.hpp"

namespace optomem {

namespace {

Real sinc(Real x) { return x == Real(0) ? Real(1) : std::sin(x) / x; }

Real sq(Real x) { return x * x; }

RMat2 filter_bracket(const RMat2& s, Real kt, Real phase) {
  // One common structure serves all three printed entries: the bracket is
  // 2 R(phase) s R(phase)^T with R a rotation by Omega_l tau, folded into the
  // explicit trigonometric form of the paper.
  const Real sxx = s(0, 0), sxy = s(0, 1), syy = s(1, 1);
  const Real co = std::cos(phase), si = std::sin(phase);
  RMat2 out;
  out(0, 0) = (sxx - syy) * co + sxx + Real(2) * sxy * si + syy;
  out(0, 1) = (syy - sxx) * si + Real(2) * sxy * co;
  out(1, 0) = out(0, 1);
  out(1, 1) = (syy - sxx) * co + sxx - Real(2) * sxy * si + syy;
  return RMat2(kt / 2 * out);
}

}  // namespace

OutputCovariance output_covariance(const RMat2& sigma_block, double kappa_out, double tau,
                                   double omega_l, CovarianceMode mode) {
  if (tau <= 0.0) throw config_error("output_covariance: detection_window must be positive");
  const Real kt = static_cast<Real>(kappa_out) * static_cast<Real>(tau) *
                  sq(sinc(static_cast<Real>(omega_l) * static_cast<Real>(tau) / 2));
  RMat2 s = sigma_block;
  if (mode == CovarianceMode::VacuumConsistent) s -= RMat2::Identity() / 2;

  OutputCovariance out;
  out.sigma = filter_bracket(s, kt, static_cast<Real>(omega_l) * static_cast<Real>(tau));
  out.sigma += RMat2::Identity() / 2;
  out.filter_freq = omega_l;
  out.detection_window = tau;
  out.mode = mode;
  return out;
}

RMat2 output_covariance_derivative(const RMat2& dsigma_block, double kappa_out, double tau,
                                   double omega_l) {
  if (tau <= 0.0) throw config_error("output_covariance: detection_window must be positive");
  const Real kt = static_cast<Real>(kappa_out) * static_cast<Real>(tau) *
                  sq(sinc(static_cast<Real>(omega_l) * static_cast<Real>(tau) / 2));
  return filter_bracket(dsigma_block, kt, static_cast<Real>(omega_l) * static_cast<Real>(tau));
}

double wigner_at(const Eigen::Matrix2d& sigma_out, double x, double y) {
  const double det = sigma_out.determinant();
  if (det <= 0.0) throw numerics_error("wigner_at: covariance must be positive definite");
  Eigen::Vector2d r(x, y);
  const double quad = r.dot(sigma_out.inverse() * r);
  return std::exp(-quad / 2.0) / (consts::two_pi * std::sqrt(det));
}

}  // namespace optomem
