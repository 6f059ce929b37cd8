#pragma once

#include <Eigen/Dense>

#include "optomem/errors.hpp"
#include "optomem/params.hpp"

namespace optomem {

enum class MatrixKind { Covariance, Dynamical };

/// Per-coordinate scale vector for the operator ordering of each model:
/// quadratures unscaled, momenta in p_zpf, positions in x_zpf.
/// TR: (X, Y, p1, p2, q1, q2); CC: (X1..Y3, p1, p2, q1, q2).
template <typename Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> scale_vector(const SystemParams& p, int dim) {
  if (dim != 6 && dim != 10)
    throw numerics_error("scale_vector: expected dimension 6 (TR) or 10 (CC)");
  Eigen::Vector<Scalar, Eigen::Dynamic> s(dim);
  const int nopt = dim - 4;
  for (int i = 0; i < nopt; ++i) s[i] = Scalar(1);
  s[nopt] = s[nopt + 1] = static_cast<Scalar>(p.scale.p_zpf);
  s[nopt + 2] = s[nopt + 3] = static_cast<Scalar>(p.scale.x_zpf);
  return s;
}

/// SI -> dimensionless. Covariance: sigma~ = S^-1 sigma S^-1.
/// Dynamical: A~ = S^-1 A S / omega_m (time measured in 1/omega_m).
template <typename Derived>
auto to_dimensionless(const SystemParams& p,
                      const Eigen::MatrixBase<Derived>& m_si, MatrixKind kind) {
  using Scalar = typename Derived::Scalar;
  if (m_si.rows() != m_si.cols())
    throw numerics_error("to_dimensionless: matrix must be square");
  auto s = scale_vector<Scalar>(p, static_cast<int>(m_si.rows()));
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      s.cwiseInverse().asDiagonal() * m_si.derived();
  if (kind == MatrixKind::Covariance) {
    out = out * s.cwiseInverse().asDiagonal();
  } else {
    out = out * s.asDiagonal();
    out *= static_cast<Scalar>(1.0 / p.mech_freq);
  }
  return out;
}

/// Dimensionless -> SI (inverse of to_dimensionless).
template <typename Derived>
auto from_dimensionless(const SystemParams& p,
                        const Eigen::MatrixBase<Derived>& m_dl, MatrixKind kind) {
  using Scalar = typename Derived::Scalar;
  if (m_dl.rows() != m_dl.cols())
    throw numerics_error("from_dimensionless: matrix must be square");
  auto s = scale_vector<Scalar>(p, static_cast<int>(m_dl.rows()));
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      s.asDiagonal() * m_dl.derived();
  if (kind == MatrixKind::Covariance) {
    out = out * s.asDiagonal();
  } else {
    out = out * s.cwiseInverse().asDiagonal();
    out *= static_cast<Scalar>(p.mech_freq);
  }
  return out;
}

/// Fisher matrices computed per dimensionless disorder dq/x_zpf convert to SI
/// (1/m^2) by dividing by x_zpf^2; inverse bounds (m^2) multiply by x_zpf^2.
inline Eigen::Matrix2d fisher_to_si(const SystemParams& p, const Eigen::Matrix2d& f_dl) {
  return f_dl / (p.scale.x_zpf * p.scale.x_zpf);
}

}  // namespace optomem
