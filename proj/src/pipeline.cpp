#include "optomem/pipeline.hpp"

#include <cmath>
#include <complex>

#include "optomem/scaling.hpp"

namespace optomem {

RMat2 CavitySolution::output_block() const {
  const int off = model == Model::CC ? 4 : 0;
  return cov.sigma.block(off, off, 2, 2);
}

CavitySolution solve_cavity(const SystemParams& p, const Disorder& d) {
  CavitySolution sol;
  sol.model = p.model;
  if (p.model == Model::TR) {
    sol.tr = solve_steady_state_tr(p, d);
    sol.sys = dynamical_matrix(p, *sol.tr);
    sol.nbar = static_cast<double>(sol.tr->nbar);
    sol.omega_c_eff = static_cast<double>(
        static_cast<Real>(p.cavity_freq) +
        tr_frequency_shift(p, static_cast<Real>(d.dq1), static_cast<Real>(d.dq2)));
  } else {
    sol.cc = solve_steady_state_cc(p, d);
    sol.sys = dynamical_matrix(p, *sol.cc);
    double n = 0.0;
    for (const auto& a : sol.cc->alpha) n += static_cast<double>(std::norm(a));
    sol.nbar = n;
    sol.omega_c_eff = p.cavity_freq;
  }
  sol.stability = check_stability(sol.sys.a);
  if (sol.stability.stable) sol.cov = solve_lyapunov<Real>(sol.sys.a, sol.sys.d);
  return sol;
}

CovarianceHealth validate_covariance(const SystemParams& p, const CavitySolution& sol) {
  (void)p;
  CovarianceHealth h;
  h.lyapunov_residual = static_cast<double>(sol.cov.residual);
  h.ill_conditioned = sol.cov.ill_conditioned;

  const int n = sol.sys.dim;
  using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
  CMat m = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = std::complex<Real>(sol.cov.sigma(i, j), 0);
  const int nopt = n - 4;
  auto add_omega = [&](int i, int j, Real val) {
    m(i, j) += std::complex<Real>(0, val / 2);
    m(j, i) += std::complex<Real>(0, -val / 2);
  };
  for (int k = 0; k < nopt / 2; ++k) add_omega(2 * k, 2 * k + 1, Real(1));  // [X,Y] = i
  // ordering (p1, p2, q1, q2): [q, p] = 2i in zero-point units
  add_omega(nopt + 2, nopt, Real(2));
  add_omega(nopt + 3, nopt + 1, Real(2));
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  h.min_symplectic_eig = static_cast<double>(es.eigenvalues().minCoeff());
  return h;
}

namespace {

RMat dynamical_at(const SystemParams& p, const Disorder& d) {
  if (p.model == Model::TR) return dynamical_matrix(p, solve_steady_state_tr(p, d)).a;
  return dynamical_matrix(p, solve_steady_state_cc(p, d)).a;
}

}  // namespace

std::pair<RMat, RMat> covariance_derivatives(const SystemParams& p, const Disorder& d,
                                             const CavitySolution& base) {
  if (!base.stability.stable)
    throw physics_error("covariance_derivatives: base point is unstable");
  const double h = kDisorderFdStep * p.scale.x_zpf;  // SI step
  const Real hd = static_cast<Real>(kDisorderFdStep);
  std::pair<RMat, RMat> out;
  for (int i = 0; i < 2; ++i) {
    Disorder dp = d, dm = d;
    (i == 0 ? dp.dq1 : dp.dq2) += h;
    (i == 0 ? dm.dq1 : dm.dq2) -= h;
    RMat ap, am;
    try {
      ap = dynamical_at(p, dp);
      am = dynamical_at(p, dm);
    } catch (const physics_error& e) {
      throw physics_error(std::string("covariance_derivatives: steady-state solve failed at "
                                      "the FD-shifted disorder (possible stability crossing): ") +
                          e.what());
    }
    const RMat da = (ap - am) / (2 * hd);
    const RMat rhs = da * base.cov.sigma + base.cov.sigma * da.transpose();
    auto sol = solve_lyapunov<Real>(base.sys.a, rhs);
    RMat ds = sol.sigma;
    ds = ((ds + ds.transpose()) / 2).eval();
    (i == 0 ? out.first : out.second) = ds;
  }
  return out;
}

InfoPoint evaluate_point(const SystemParams& p, const Disorder& d,
                         const DetectionSettings& det) {
  det.validate();
  InfoPoint pt;
  pt.base = solve_cavity(p, d);
  if (!pt.base.stability.stable)
    throw physics_error("evaluate_point: dynamical matrix unstable (max Re eig = " +
                        std::to_string(pt.base.stability.max_real_part) + ")");
  const double kout = p.output_kappa();
  pt.sigma_out = output_covariance(pt.base.output_block(), kout, det.detection_window,
                                   det.filter_freq, det.mode);

  auto [ds1, ds2] = covariance_derivatives(p, d, pt.base);
  const int off = p.model == Model::CC ? 4 : 0;
  pt.dsigma_out1 = output_covariance_derivative(ds1.block(off, off, 2, 2), kout,
                                                det.detection_window, det.filter_freq);
  pt.dsigma_out2 = output_covariance_derivative(ds2.block(off, off, 2, 2), kout,
                                                det.detection_window, det.filter_freq);

  const Eigen::Matrix2d h_dl = qfim(pt.sigma_out.sigma, pt.dsigma_out1, pt.dsigma_out2);
  const Eigen::Matrix2d f_dl = cfim(pt.sigma_out.sigma, pt.dsigma_out1, pt.dsigma_out2,
                                    det.lo_phase, det.detector_efficiency);
  pt.info = InfoMatrices::assemble(fisher_to_si(p, h_dl), fisher_to_si(p, f_dl));
  return pt;
}

double homodyne_variance(const SystemParams& p, const Disorder& d,
                         const DetectionSettings& det) {
  det.validate();
  CavitySolution sol = solve_cavity(p, d);
  if (!sol.stability.stable)
    throw physics_error("homodyne_variance: dynamical matrix unstable");
  const auto oc = output_covariance(sol.output_block(), p.output_kappa(),
                                    det.detection_window, det.filter_freq, det.mode);
  Eigen::Vector<Real, 2> r(std::cos(static_cast<Real>(det.lo_phase)),
                           std::sin(static_cast<Real>(det.lo_phase)));
  const Real s = r.dot(oc.sigma * r);
  const Real eta = static_cast<Real>(det.detector_efficiency);
  return static_cast<double>((Real(1) - eta + Real(2) * eta * s) / (Real(4) * eta));
}

}  // namespace optomem
