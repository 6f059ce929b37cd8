#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "optomem/params.hpp"

namespace optomem {

// The cavity/fluctuation pipeline runs in extended precision: the paper-scale
// systems pair thermal variances ~1e5 with damping ~1e-8 (dimensionless), and
// the spec's Lyapunov residual bound (1e-10) is out of reach in double.
using Real = long double;
using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using RVec = Eigen::Vector<Real, Eigen::Dynamic>;
using CplxR = std::complex<Real>;

// ---------------------------------------------------------------------------
// Disorder maps
// ---------------------------------------------------------------------------

/// CC inner-cavity frequencies omega_j = omega_c [1 - 3(dq_j - dq_{j-1})/L],
/// dq_0 = dq_3 = 0. The telescoping sum omega_1+omega_2+omega_3 = 3 omega_c
/// holds exactly.
std::array<double, 3> cc_disordered_frequencies(const SystemParams& p, const Disorder& d);

/// The shifts omega_j - omega_c, computed without forming the absolute
/// frequencies (the shifts are ~1e-5 rad/s at derivative steps while
/// omega_c ~ 1e15; a difference of absolutes would drown them in rounding).
std::array<Real, 3> cc_frequency_shifts(const SystemParams& p, Real dq1, Real dq2);

/// CC optomechanical coupling map at absolute membrane position q (m):
/// g(q) = (n pi c / L^2) sqrt(r) sin(2kq) / sqrt(1 - r cos^2(2kq)).
double cc_coupling(const SystemParams& p, double q);

/// Same map evaluated at the calibrated rest phase plus disorder.
Real cc_coupling_from_rest(const SystemParams& p, Real dq);

/// TR single-mode frequency shift omega_c(q0+dq) - n pi c / L via exact
/// reduced phases of the rest geometry (spacing L/3, pair offset s0).
Real tr_frequency_shift(const SystemParams& p, Real dq1, Real dq2);

/// TR frequency at absolute positions q1, q2 (m), as printed.
double tr_cavity_frequency(const SystemParams& p, double q1, double q2);

/// Calibrated rest positions (left-mirror origin): q1 = L/3 + s0/2,
/// q2 = 2L/3 + s0/2.
std::pair<double, double> tr_rest_positions(const SystemParams& p);

struct TrCouplings {
  Real g1 = 0, g2 = 0;      // rad/s/m
  Real fd_error = 0;        // Richardson error estimate (rad/s/m)
};

/// g_i = d omega_c / d q_i at the disordered positions, by central finite
/// differences with one Richardson extrapolation level.
TrCouplings tr_couplings(const SystemParams& p, Real dq1, Real dq2);

// ---------------------------------------------------------------------------
// Steady states
// ---------------------------------------------------------------------------

struct SteadyStateTR {
  CplxR alpha{0, 0};
  Real q1 = 0, q2 = 0;          // mean displacements, m
  Real delta = 0;               // effective detuning Delta = Delta0 + C nbar, rad/s
  Real g1 = 0, g2 = 0;          // disorder-shifted couplings, rad/s/m
  Real nbar = 0;                // |alpha|^2
  std::vector<Real> nbar_roots; // all real non-negative roots of the cubic
  Real residual = 0;            // stationarity residual, dimensionless
};

struct SteadyStateCC {
  std::array<CplxR, 3> alpha{};
  Real q1 = 0, q2 = 0;              // mean displacements, m
  std::array<Real, 3> delta{};      // effective detunings Delta_j, rad/s
  std::array<Real, 3> delta0{};     // per-cavity base detunings omega_j - omega_L
  Real g1 = 0, g2 = 0;              // disorder-shifted couplings, rad/s/m
  Real residual = 0;                // Newton residual, dimensionless
  int iterations = 0;
};

/// Analytic TR steady state: real cubic in nbar = |alpha|^2 solved via the
/// companion matrix; all non-negative real roots reported, smallest selected.
SteadyStateTR solve_steady_state_tr(const SystemParams& p, const Disorder& d);

/// Damped Newton on 8 real unknowns (Re/Im alpha_1..3, q1, q2) with the g=0
/// linear tridiagonal solve as initial guess; perturbed restarts detect
/// multiple roots.
SteadyStateCC solve_steady_state_cc(const SystemParams& p, const Disorder& d);

// ---------------------------------------------------------------------------
// Linearized fluctuation dynamics
// ---------------------------------------------------------------------------

/// Dynamical and diffusion matrices of the fluctuation dynamics, dimensionless
/// (zero-point units, time in 1/omega_m). Operator ordering:
/// TR (X, Y, p1, p2, q1, q2); CC (X1, Y1, X2, Y2, X3, Y3, p1, p2, q1, q2).
struct LinearSystem {
  RMat a;
  RMat d;
  int dim = 0;

  Eigen::MatrixXd a_si(const SystemParams& p) const;  // rad/s entries
  Eigen::MatrixXd d_si(const SystemParams& p) const;
};

LinearSystem dynamical_matrix(const SystemParams& p, const SteadyStateTR& ss);
LinearSystem dynamical_matrix(const SystemParams& p, const SteadyStateCC& ss);

struct StabilityReport {
  bool stable = false;
  double max_real_part = 0.0;
  std::vector<std::complex<double>> eigenvalues;
};

/// Stable iff max Re(eig) < -1e-12 * ||A||_F.
StabilityReport check_stability(const RMat& a);

}  // namespace optomem
