#include "optomem/models.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "optomem/scaling.hpp"

namespace optomem {

using consts::c_light;
using consts::hbar;
using consts::k_boltzmann;
using consts::pi;

namespace {

Real sq(Real x) { return x * x; }

// Parity signs of the rest geometry: k(q1+q2) = n pi + psi_s and
// k(q2-q1) = (n/3) pi + psi_d reduce exactly through integer parities.
struct RestParity {
  Real sign_n;   // (-1)^n
  Real sign_nu;  // (-1)^(n/3)
};

RestParity rest_parity(const SystemParams& p) {
  return {(p.mode_index % 2 != 0) ? Real(-1) : Real(1),
          ((p.mode_index / 3) % 2 != 0) ? Real(-1) : Real(1)};
}

Real clamp_unit(Real x) {
  if (x > Real(1)) {
    if (x > Real(1) + Real(1e-12)) throw numerics_error("arcsin argument out of range");
    return Real(1);
  }
  if (x < Real(-1)) {
    if (x < Real(-1) - Real(1e-12)) throw numerics_error("arcsin argument out of range");
    return Real(-1);
  }
  return x;
}

// Shift of the TR mode frequency for given reduced phases.
Real tr_shift_from_phases(const SystemParams& p, Real psi_s, Real psi_d, Real sign_n,
                          Real sign_nu) {
  const Real r = static_cast<Real>(p.reflectivity);
  const Real cl = static_cast<Real>(p.cavity_length);
  const Real denom = std::sqrt(Real(1) + r * r - Real(2) * r * std::cos(Real(2) * psi_d));
  const Real f = Real(2) * std::sqrt(r) * (sign_n * std::cos(psi_s)) *
                 (sign_nu * std::sin(psi_d)) / denom;
  const Real theta = std::asin(clamp_unit(std::sqrt(r) * std::sin(Real(2) * psi_d) / denom));
  return sign_n * (static_cast<Real>(c_light) / cl) * std::asin(clamp_unit(f)) -
         (static_cast<Real>(c_light) / cl) * theta;
}

}  // namespace

std::array<Real, 3> cc_frequency_shifts(const SystemParams& p, Real dq1, Real dq2) {
  const Real wc = static_cast<Real>(p.cavity_freq);
  const Real cl = static_cast<Real>(p.cavity_length);
  return {-Real(3) * wc * dq1 / cl, -Real(3) * wc * (dq2 - dq1) / cl,
          Real(3) * wc * dq2 / cl};
}

std::array<double, 3> cc_disordered_frequencies(const SystemParams& p, const Disorder& d) {
  validate_disorder(p, d);
  auto sh = cc_frequency_shifts(p, static_cast<Real>(d.dq1), static_cast<Real>(d.dq2));
  return {static_cast<double>(static_cast<Real>(p.cavity_freq) + sh[0]),
          static_cast<double>(static_cast<Real>(p.cavity_freq) + sh[1]),
          static_cast<double>(static_cast<Real>(p.cavity_freq) + sh[2])};
}

double cc_coupling(const SystemParams& p, double q) {
  if (p.reflectivity >= 1.0) throw config_error("cc_coupling: reflectivity must be < 1");
  const double chi = 2.0 * p.wavenumber * q;
  const double r = p.reflectivity;
  const double cchi = std::cos(chi);
  const double num = std::sqrt(r) * std::sin(chi);
  return (static_cast<double>(p.mode_index) * pi * c_light /
          (p.cavity_length * p.cavity_length)) *
         num / std::sqrt(1.0 - r * cchi * cchi);
}

Real cc_coupling_from_rest(const SystemParams& p, Real dq) {
  const Real chi = static_cast<Real>(p.rest_phase_cc) +
                   Real(2) * static_cast<Real>(p.wavenumber) * dq;
  const Real r = static_cast<Real>(p.reflectivity);
  const Real cchi = std::cos(chi);
  return static_cast<Real>(static_cast<double>(p.mode_index) * pi * c_light /
                           (p.cavity_length * p.cavity_length)) *
         std::sqrt(r) * std::sin(chi) / std::sqrt(Real(1) - r * cchi * cchi);
}

Real tr_frequency_shift(const SystemParams& p, Real dq1, Real dq2) {
  const auto par = rest_parity(p);
  const Real k = static_cast<Real>(p.wavenumber);
  const Real psi_s = static_cast<Real>(p.rest_phase_sum) + k * (dq1 + dq2);
  const Real psi_d = k * (dq2 - dq1);
  return tr_shift_from_phases(p, psi_s, psi_d, par.sign_n, par.sign_nu);
}

double tr_cavity_frequency(const SystemParams& p, double q1, double q2) {
  const Real k = static_cast<Real>(p.wavenumber);
  const Real psi_s = k * (static_cast<Real>(q1) + static_cast<Real>(q2));
  const Real psi_d = k * (static_cast<Real>(q2) - static_cast<Real>(q1));
  const Real base = static_cast<Real>(p.mode_index) * static_cast<Real>(pi) *
                    static_cast<Real>(c_light) / static_cast<Real>(p.cavity_length);
  return static_cast<double>(base + tr_shift_from_phases(p, psi_s, psi_d, Real(1), Real(1)));
}

std::pair<double, double> tr_rest_positions(const SystemParams& p) {
  const double s0 = p.rest_phase_sum / p.wavenumber;
  return {p.cavity_length / 3.0 + s0 / 2.0, 2.0 * p.cavity_length / 3.0 + s0 / 2.0};
}

TrCouplings tr_couplings(const SystemParams& p, Real dq1, Real dq2) {
  const Real h = std::max(Real(1e-6) * static_cast<Real>(pi / p.wavenumber), Real(1e-13));
  auto deriv = [&](int which) {
    auto eval = [&](Real e1, Real e2) { return tr_frequency_shift(p, e1, e2); };
    const Real h1 = which == 0 ? h : Real(0);
    const Real h2 = which == 1 ? h : Real(0);
    const Real wide = (eval(dq1 + h1, dq2 + h2) - eval(dq1 - h1, dq2 - h2)) / (Real(2) * h);
    const Real narrow =
        (eval(dq1 + h1 / 2, dq2 + h2 / 2) - eval(dq1 - h1 / 2, dq2 - h2 / 2)) / h;
    const Real rich = (Real(4) * narrow - wide) / Real(3);
    return std::pair<Real, Real>(rich, std::abs(narrow - wide) / Real(3));
  };
  auto [g1, e1] = deriv(0);
  auto [g2, e2] = deriv(1);
  TrCouplings out;
  out.g1 = g1;
  out.g2 = g2;
  out.fd_error = std::max(e1, e2);
  return out;
}

// ---------------------------------------------------------------------------
// TR steady state: cubic in nbar
// ---------------------------------------------------------------------------

SteadyStateTR solve_steady_state_tr(const SystemParams& p, const Disorder& d) {
  validate_disorder(p, d);
  auto gs = tr_couplings(p, static_cast<Real>(d.dq1), static_cast<Real>(d.dq2));

  const Real eps = static_cast<Real>(drive_amplitude(p));
  const Real kap = static_cast<Real>(p.kappa);
  const Real delta0 = static_cast<Real>(p.detuning);
  const Real cshift = static_cast<Real>(hbar) * (sq(gs.g1) + sq(gs.g2)) /
                      (static_cast<Real>(p.membrane_mass) * sq(static_cast<Real>(p.mech_freq)));

  SteadyStateTR ss;
  ss.g1 = gs.g1;
  ss.g2 = gs.g2;

  // |eps|^2 = nbar ((kap/2)^2 + (delta0 + C nbar)^2)
  std::vector<Real> roots;
  if (cshift == Real(0) || eps == Real(0)) {
    roots.push_back(eps * eps / (sq(kap / 2) + sq(delta0)));
  } else {
    Eigen::Matrix<Real, 3, 3> comp = Eigen::Matrix<Real, 3, 3>::Zero();
    const Real c3 = sq(cshift);
    const Real c2 = Real(2) * cshift * delta0;
    const Real c1 = sq(kap / 2) + sq(delta0);
    const Real c0 = -eps * eps;
    comp(0, 2) = -c0 / c3;
    comp(1, 2) = -c1 / c3;
    comp(2, 2) = -c2 / c3;
    comp(1, 0) = comp(2, 1) = Real(1);
    Eigen::EigenSolver<Eigen::Matrix<Real, 3, 3>> es(comp);
    for (int i = 0; i < 3; ++i) {
      const auto ev = es.eigenvalues()[i];
      const Real scale = std::max(Real(1), std::abs(ev.real()));
      if (std::abs(ev.imag()) < Real(1e-9) * scale && ev.real() >= Real(0))
        roots.push_back(ev.real());
    }
    std::sort(roots.begin(), roots.end());
    // Polish with Newton on the cubic (the selected root drives everything).
    for (Real& nb : roots) {
      for (int it = 0; it < 4; ++it) {
        const Real f = ((c3 * nb + c2) * nb + c1) * nb + c0;
        const Real fp = (Real(3) * c3 * nb + Real(2) * c2) * nb + c1;
        if (fp == Real(0)) break;
        nb -= f / fp;
      }
      if (nb < Real(0)) nb = Real(0);
    }
  }
  if (roots.empty())
    throw physics_error("solve_steady_state_tr: no non-negative real root (unphysical parameters)");

  ss.nbar_roots = roots;
  ss.nbar = roots.front();
  ss.delta = delta0 + cshift * ss.nbar;
  ss.alpha = CplxR(eps, 0) / CplxR(kap / 2, ss.delta);
  const Real mw2 = static_cast<Real>(p.membrane_mass) * sq(static_cast<Real>(p.mech_freq));
  ss.q1 = static_cast<Real>(hbar) * gs.g1 * ss.nbar / mw2;
  ss.q2 = static_cast<Real>(hbar) * gs.g2 * ss.nbar / mw2;

  // Stationarity residual of eps = alpha (i Delta + kap/2), relative.
  const CplxR lhs = ss.alpha * CplxR(kap / 2, ss.delta);
  ss.residual = std::abs(lhs - CplxR(eps, 0)) / std::max(eps, Real(1));
  return ss;
}

// ---------------------------------------------------------------------------
// CC steady state: damped Newton
// ---------------------------------------------------------------------------

namespace {

struct CcScaled {
  std::array<Real, 3> kap;    // kappa_j / omega_m
  std::array<Real, 3> det0;   // (detuning + shift_j) / omega_m
  Real hop;                   // J / omega_m
  Real g1t, g2t;              // g_i x_zpf / omega_m
  Real eps;                   // drive / omega_m
};

CcScaled cc_scaled(const SystemParams& p, const Disorder& d, Real* g1_out, Real* g2_out) {
  CcScaled s;
  const Real wm = static_cast<Real>(p.mech_freq);
  const auto sh = cc_frequency_shifts(p, static_cast<Real>(d.dq1), static_cast<Real>(d.dq2));
  for (int j = 0; j < 3; ++j)
    s.det0[j] = (static_cast<Real>(p.detuning) + sh[j]) / wm;
  s.kap = {static_cast<Real>(p.kappa1) / wm, static_cast<Real>(p.kappa2) / wm,
           static_cast<Real>(p.kappa3) / wm};
  s.hop = static_cast<Real>(p.hopping) / wm;
  const Real g1 = cc_coupling_from_rest(p, static_cast<Real>(d.dq1));
  const Real g2 = cc_coupling_from_rest(p, static_cast<Real>(d.dq2));
  if (g1_out) *g1_out = g1;
  if (g2_out) *g2_out = g2;
  const Real xz = static_cast<Real>(p.scale.x_zpf);
  s.g1t = g1 * xz / wm;
  s.g2t = g2 * xz / wm;
  s.eps = static_cast<Real>(drive_amplitude(p)) / wm;
  return s;
}

using Vec8 = Eigen::Matrix<Real, 8, 1>;
using Mat8 = Eigen::Matrix<Real, 8, 8>;

Vec8 cc_residual(const CcScaled& s, const Vec8& x) {
  const CplxR a1(x[0], x[1]), a2(x[2], x[3]), a3(x[4], x[5]);
  const Real q1 = x[6], q2 = x[7];
  const CplxR i1(0, 1);
  const CplxR f1 = (i1 * (s.det0[0] + s.g1t * q1) + s.kap[0] / 2) * a1 + i1 * s.hop * a2 - s.eps;
  const CplxR f2 =
      (i1 * (s.det0[1] + s.g2t * q2 - s.g1t * q1) + s.kap[1] / 2) * a2 + i1 * s.hop * (a1 + a3);
  const CplxR f3 = (i1 * (s.det0[2] - s.g2t * q2) + s.kap[2] / 2) * a3 + i1 * s.hop * a2;
  Vec8 f;
  f << f1.real(), f1.imag(), f2.real(), f2.imag(), f3.real(), f3.imag(),
      q1 - Real(2) * s.g1t * (std::norm(a2) - std::norm(a1)),
      q2 - Real(2) * s.g2t * (std::norm(a3) - std::norm(a2));
  return f;
}

Mat8 cc_jacobian(const CcScaled& s, const Vec8& x) {
  Mat8 j = Mat8::Zero();
  const Real d1 = s.det0[0] + s.g1t * x[6];
  const Real d2 = s.det0[1] + s.g2t * x[7] - s.g1t * x[6];
  const Real d3 = s.det0[2] - s.g2t * x[7];
  auto put_mode = [&](int row, Real det, Real kap) {
    j(row, row) = kap / 2;
    j(row, row + 1) = -det;
    j(row + 1, row) = det;
    j(row + 1, row + 1) = kap / 2;
  };
  put_mode(0, d1, s.kap[0]);
  put_mode(2, d2, s.kap[1]);
  put_mode(4, d3, s.kap[2]);
  auto put_hop = [&](int row, int col) {
    j(row, col + 1) -= s.hop;
    j(row + 1, col) += s.hop;
  };
  put_hop(0, 2);            // f1 <- a2
  put_hop(2, 0);            // f2 <- a1
  put_hop(2, 4);            // f2 <- a3
  put_hop(4, 2);            // f3 <- a2
  // d f1 / d q1 = i g1 a1 -> (-g1 Im a1, g1 Re a1)
  j(0, 6) = -s.g1t * x[1];
  j(1, 6) = s.g1t * x[0];
  // d f2 / d q1 = -i g1 a2, d f2 / d q2 = +i g2 a2
  j(2, 6) = s.g1t * x[3];
  j(3, 6) = -s.g1t * x[2];
  j(2, 7) = -s.g2t * x[3];
  j(3, 7) = s.g2t * x[2];
  // d f3 / d q2 = -i g2 a3
  j(4, 7) = s.g2t * x[5];
  j(5, 7) = -s.g2t * x[4];
  // mechanical rows
  j(6, 0) = Real(2) * s.g1t * Real(2) * x[0];
  j(6, 1) = Real(2) * s.g1t * Real(2) * x[1];
  j(6, 2) = -Real(2) * s.g1t * Real(2) * x[2];
  j(6, 3) = -Real(2) * s.g1t * Real(2) * x[3];
  j(6, 6) = Real(1);
  j(7, 2) = Real(2) * s.g2t * Real(2) * x[2];
  j(7, 3) = Real(2) * s.g2t * Real(2) * x[3];
  j(7, 4) = -Real(2) * s.g2t * Real(2) * x[4];
  j(7, 5) = -Real(2) * s.g2t * Real(2) * x[5];
  j(7, 7) = Real(1);
  return j;
}

Vec8 cc_linear_guess(const CcScaled& s) {
  using CMat3 = Eigen::Matrix<CplxR, 3, 3>;
  using CVec3 = Eigen::Matrix<CplxR, 3, 1>;
  const CplxR i1(0, 1);
  CMat3 m = CMat3::Zero();
  m(0, 0) = i1 * s.det0[0] + s.kap[0] / 2;
  m(1, 1) = i1 * s.det0[1] + s.kap[1] / 2;
  m(2, 2) = i1 * s.det0[2] + s.kap[2] / 2;
  m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = i1 * s.hop;
  CVec3 rhs;
  rhs << CplxR(s.eps, 0), CplxR(0, 0), CplxR(0, 0);
  CVec3 a = m.partialPivLu().solve(rhs);
  Vec8 x;
  x << a[0].real(), a[0].imag(), a[1].real(), a[1].imag(), a[2].real(), a[2].imag(), Real(0),
      Real(0);
  return x;
}

// Damped Newton; returns final iterate, residual norm and iteration count.
std::tuple<Vec8, Real, int> cc_newton(const CcScaled& s, Vec8 x) {
  const Real tol = Real(1e-14) * std::max(Real(1), s.eps);
  Real fn = cc_residual(s, x).norm();
  int it = 0;
  for (; it < 200 && fn > tol; ++it) {
    const Vec8 f = cc_residual(s, x);
    const Vec8 dx = cc_jacobian(s, x).partialPivLu().solve(-f);
    Real lambda(1);
    Vec8 xn = x + dx;
    Real fnn = cc_residual(s, xn).norm();
    int halvings = 0;
    while (fnn >= fn && halvings < 40) {
      lambda /= 2;
      xn = x + lambda * dx;
      fnn = cc_residual(s, xn).norm();
      ++halvings;
    }
    if (fnn >= fn) break;  // no descent direction left
    x = xn;
    fn = fnn;
  }
  return {x, fn, it};
}

}  // namespace

SteadyStateCC solve_steady_state_cc(const SystemParams& p, const Disorder& d) {
  validate_disorder(p, d);
  Real g1 = 0, g2 = 0;
  const CcScaled s = cc_scaled(p, d, &g1, &g2);

  auto [x, fn, iters] = cc_newton(s, cc_linear_guess(s));
  const Real accept = Real(1e-10) * std::max(Real(1), s.eps);
  if (fn > accept)
    throw physics_error("solve_steady_state_cc: Newton did not converge, residual " +
                        std::to_string(static_cast<double>(fn)));

  // Perturbed restarts: a different converged root signals bistability.
  const Real xscale = x.template lpNorm<Eigen::Infinity>();
  for (const Real pert : {Real(0.1), Real(-0.15)}) {
    Vec8 x0 = x;
    for (int i = 0; i < 6; ++i) x0[i] *= (Real(1) + pert);
    x0[6] += pert * std::max(Real(1), std::abs(x[6]));
    x0[7] -= pert * std::max(Real(1), std::abs(x[7]));
    auto [xr, fr, itr] = cc_newton(s, x0);
    if (fr <= accept && (xr - x).norm() > Real(1e-6) * std::max(Real(1), xscale))
      throw physics_error("solve_steady_state_cc: multiple steady-state roots detected "
                          "(bistable regime); root separation " +
                          std::to_string(static_cast<double>((xr - x).norm())));
  }

  SteadyStateCC ss;
  ss.alpha = {CplxR(x[0], x[1]), CplxR(x[2], x[3]), CplxR(x[4], x[5])};
  const Real wm = static_cast<Real>(p.mech_freq);
  const Real xz = static_cast<Real>(p.scale.x_zpf);
  ss.q1 = x[6] * xz;
  ss.q2 = x[7] * xz;
  ss.g1 = g1;
  ss.g2 = g2;
  for (int j = 0; j < 3; ++j) ss.delta0[j] = s.det0[j] * wm;
  ss.delta[0] = ss.delta0[0] + g1 * ss.q1;
  ss.delta[1] = ss.delta0[1] + (g2 * ss.q2 - g1 * ss.q1);
  ss.delta[2] = ss.delta0[2] - g2 * ss.q2;
  ss.residual = fn;
  ss.iterations = iters;
  return ss;
}

// ---------------------------------------------------------------------------
// Dynamical matrices (dimensionless)
// ---------------------------------------------------------------------------

namespace {

Real thermal_diffusion(const SystemParams& p) {
  // 2 m gamma k_B T scaled by p_zpf^2 omega_m = 4 gamma k_B T / (hbar omega_m^2)
  return Real(4) * static_cast<Real>(p.mech_damping) * static_cast<Real>(k_boltzmann) *
         static_cast<Real>(p.temperature) /
         (static_cast<Real>(hbar) * sq(static_cast<Real>(p.mech_freq)));
}

}  // namespace

LinearSystem dynamical_matrix(const SystemParams& p, const SteadyStateTR& ss) {
  const Real wm = static_cast<Real>(p.mech_freq);
  const Real xz = static_cast<Real>(p.scale.x_zpf);
  const Real kt = static_cast<Real>(p.kappa) / wm;
  const Real dt = ss.delta / wm;
  const Real gt = static_cast<Real>(p.mech_damping) / wm;
  const Real g1t = ss.g1 * xz / wm;
  const Real g2t = ss.g2 * xz / wm;
  const Real ra = ss.alpha.real(), ia = ss.alpha.imag();
  const Real s2 = std::sqrt(Real(2));

  LinearSystem sys;
  sys.dim = 6;
  sys.a = RMat::Zero(6, 6);
  auto& a = sys.a;
  a(0, 0) = -kt / 2; a(0, 1) = dt;
  a(1, 0) = -dt;     a(1, 1) = -kt / 2;
  a(0, 4) = s2 * g1t * ia;  a(0, 5) = s2 * g2t * ia;
  a(1, 4) = -s2 * g1t * ra; a(1, 5) = -s2 * g2t * ra;
  // momentum rows carry hbar/p_zpf = 2 x_zpf
  a(2, 0) = -2 * s2 * g1t * ra; a(2, 1) = -2 * s2 * g1t * ia;
  a(3, 0) = -2 * s2 * g2t * ra; a(3, 1) = -2 * s2 * g2t * ia;
  a(2, 2) = -gt; a(3, 3) = -gt;
  a(2, 4) = -1;  a(3, 5) = -1;
  a(4, 2) = 1;   a(5, 3) = 1;

  sys.d = RMat::Zero(6, 6);
  sys.d(0, 0) = sys.d(1, 1) = kt / 2;
  sys.d(2, 2) = sys.d(3, 3) = thermal_diffusion(p);
  return sys;
}

LinearSystem dynamical_matrix(const SystemParams& p, const SteadyStateCC& ss) {
  const Real wm = static_cast<Real>(p.mech_freq);
  const Real xz = static_cast<Real>(p.scale.x_zpf);
  const std::array<Real, 3> kt = {static_cast<Real>(p.kappa1) / wm,
                                  static_cast<Real>(p.kappa2) / wm,
                                  static_cast<Real>(p.kappa3) / wm};
  const Real jt = static_cast<Real>(p.hopping) / wm;
  const Real gt = static_cast<Real>(p.mech_damping) / wm;
  const Real g1t = ss.g1 * xz / wm;
  const Real g2t = ss.g2 * xz / wm;
  const Real s2 = std::sqrt(Real(2));

  LinearSystem sys;
  sys.dim = 10;
  sys.a = RMat::Zero(10, 10);
  auto& a = sys.a;
  for (int j = 0; j < 3; ++j) {
    const Real dj = ss.delta[j] / wm;
    a(2 * j, 2 * j) = -kt[j] / 2;
    a(2 * j, 2 * j + 1) = dj;
    a(2 * j + 1, 2 * j) = -dj;
    a(2 * j + 1, 2 * j + 1) = -kt[j] / 2;
  }
  // hopping pattern of the printed A11
  a(0, 3) = jt;  a(1, 2) = -jt;
  a(2, 1) = jt;  a(2, 5) = jt;
  a(3, 0) = -jt; a(3, 4) = -jt;
  a(4, 3) = jt;  a(5, 2) = -jt;
  // A12: q1 couples modes 1 (+g1) and 2 (-g1); q2 couples modes 2 (+g2), 3 (-g2).
  const auto& al = ss.alpha;
  a(0, 8) = s2 * g1t * al[0].imag();
  a(1, 8) = -s2 * g1t * al[0].real();
  a(2, 8) = -s2 * g1t * al[1].imag();
  a(3, 8) = s2 * g1t * al[1].real();
  a(2, 9) = s2 * g2t * al[1].imag();
  a(3, 9) = -s2 * g2t * al[1].real();
  a(4, 9) = -s2 * g2t * al[2].imag();
  a(5, 9) = s2 * g2t * al[2].real();
  // A21 momentum rows (factor 2 from hbar/p_zpf = 2 x_zpf)
  a(6, 0) = -2 * s2 * g1t * al[0].real();
  a(6, 1) = -2 * s2 * g1t * al[0].imag();
  a(6, 2) = 2 * s2 * g1t * al[1].real();
  a(6, 3) = 2 * s2 * g1t * al[1].imag();
  a(7, 2) = -2 * s2 * g2t * al[1].real();
  a(7, 3) = -2 * s2 * g2t * al[1].imag();
  a(7, 4) = 2 * s2 * g2t * al[2].real();
  a(7, 5) = 2 * s2 * g2t * al[2].imag();
  // A22
  a(6, 6) = a(7, 7) = -gt;
  a(6, 8) = a(7, 9) = -1;
  a(8, 6) = a(9, 7) = 1;

  sys.d = RMat::Zero(10, 10);
  for (int j = 0; j < 3; ++j) sys.d(2 * j, 2 * j) = sys.d(2 * j + 1, 2 * j + 1) = kt[j] / 2;
  sys.d(6, 6) = sys.d(7, 7) = thermal_diffusion(p);
  return sys;
}

Eigen::MatrixXd LinearSystem::a_si(const SystemParams& p) const {
  return from_dimensionless(p, a, MatrixKind::Dynamical).template cast<double>();
}

Eigen::MatrixXd LinearSystem::d_si(const SystemParams& p) const {
  // D scales as S D~ S * omega_m (the Lyapunov equation's inhomogeneity).
  auto s = scale_vector<Real>(p, dim);
  RMat out = s.asDiagonal() * d * s.asDiagonal();
  out *= static_cast<Real>(p.mech_freq);
  return out.template cast<double>();
}

StabilityReport check_stability(const RMat& a) {
  if (a.rows() != a.cols()) throw numerics_error("check_stability: matrix must be square");
  Eigen::EigenSolver<Eigen::MatrixXd> es(a.template cast<double>());
  if (es.info() != Eigen::Success) throw numerics_error("check_stability: eigensolver failed");
  StabilityReport rep;
  rep.max_real_part = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    rep.eigenvalues.push_back(es.eigenvalues()[i]);
    rep.max_real_part = std::max(rep.max_real_part, es.eigenvalues()[i].real());
  }
  const double tol = 1e-12 * static_cast<double>(a.norm());
  rep.stable = rep.max_real_part < -tol;
  return rep;
}

}  // namespace optomem
