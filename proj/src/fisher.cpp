#include "optomem/fisher.hpp"

#include <cmath>
#include <limits>

#include "optomem/errors.hpp"

namespace optomem {

namespace {

RMat2 inv2(const RMat2& m) {
  const Real det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (det == Real(0)) throw numerics_error("fisher: singular output covariance");
  RMat2 out;
  out << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return RMat2(out / det);
}

}  // namespace

SldPhaseSpace sld_phase_space(const RMat2& sigma_out, const RMat2& dsigma1,
                              const RMat2& dsigma2) {
  const RMat2 si = inv2(sigma_out);
  SldPhaseSpace out;
  out.phi1 = RMat2(si * dsigma1 * si / 2);
  out.phi2 = RMat2(si * dsigma2 * si / 2);
  out.nu1 = (out.phi1 * sigma_out).trace();
  out.nu2 = (out.phi2 * sigma_out).trace();
  return out;
}

Eigen::Matrix2d qfim(const RMat2& sigma_out, const RMat2& dsigma1, const RMat2& dsigma2) {
  const Real det = sigma_out.determinant();
  if (det < Real(0.25) * (Real(1) - Real(1e-9)))
    throw physics_error("qfim: output covariance below the uncertainty bound (det < 1/4)");
  const SldPhaseSpace sld = sld_phase_space(sigma_out, dsigma1, dsigma2);
  const RMat2* phi[2] = {&sld.phi1, &sld.phi2};
  const Real nu[2] = {sld.nu1, sld.nu2};
  Eigen::Matrix2d h;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const RMat2& pi = *phi[i];
      const RMat2& pj = *phi[j];
      const Real k = pi(0, 0) * pj(1, 1) + pj(0, 0) * pi(1, 1) - Real(2) * pi(0, 1) * pj(0, 1);
      const Real tr = (pi * sigma_out * pj * sigma_out).trace();
      h(i, j) = static_cast<double>(Real(3) * tr - nu[i] * nu[j] + (det - Real(0.5)) * k);
    }
  }
  return ((h + h.transpose()) / 2.0).eval();
}

Eigen::Matrix2d cfim(const RMat2& sigma_out, const RMat2& dsigma1, const RMat2& dsigma2,
                     double theta, double eta) {
  if (eta <= 0.0 || eta > 1.0) throw config_error("cfim: eta must lie in (0,1]");
  Eigen::Vector<Real, 2> r(std::cos(static_cast<Real>(theta)),
                           std::sin(static_cast<Real>(theta)));
  const Real s = r.dot(sigma_out * r);
  if (s <= Real(0)) throw physics_error("cfim: non-positive measured quadrature variance");
  const Real et = static_cast<Real>(eta);
  const Real den = Real(1) - et + Real(2) * et * s;
  const Real v1 = r.dot(dsigma1 * r);
  const Real v2 = r.dot(dsigma2 * r);
  const Real pref = Real(2) * et * et / (den * den);
  Eigen::Matrix2d f;
  f(0, 0) = static_cast<double>(pref * v1 * v1);
  f(0, 1) = f(1, 0) = static_cast<double>(pref * v1 * v2);
  f(1, 1) = static_cast<double>(pref * v2 * v2);
  return f;
}

double info_distance(const Eigen::Matrix2d& h, const Eigen::Matrix2d& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h - f);
  return es.eigenvalues().cwiseAbs().sum();
}

Eigen::Matrix2d pseudo_inverse(const Eigen::Matrix2d& m, int* rank) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  const double tol = 1e-12 * vals.cwiseAbs().maxCoeff();
  Eigen::Matrix2d out = Eigen::Matrix2d::Zero();
  int rk = 0;
  for (int i = 0; i < 2; ++i) {
    if (std::abs(vals[i]) > tol && tol > 0.0) {
      out += vecs.col(i) * vecs.col(i).transpose() / vals[i];
      ++rk;
    }
  }
  if (rank) *rank = rk;
  return out;
}

InfoMatrices InfoMatrices::assemble(const Eigen::Matrix2d& h_si, const Eigen::Matrix2d& f_si) {
  InfoMatrices im;
  im.h = h_si;
  im.f = f_si;
  im.h_pinv = pseudo_inverse(h_si, &im.rank_h);
  im.f_pinv = pseudo_inverse(f_si, &im.rank_f);
  im.d = info_distance(h_si, f_si);
  for (int i = 0; i < 2; ++i) {
    im.h_single[i] = h_si(i, i) > 0.0 ? 1.0 / h_si(i, i)
                                      : std::numeric_limits<double>::infinity();
    im.f_single[i] = f_si(i, i) > 0.0 ? 1.0 / f_si(i, i)
                                      : std::numeric_limits<double>::infinity();
  }
  return im;
}

}  // namespace optomem
