#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>

#include "optomem/constants.hpp"
#include "optomem/models.hpp"
#include "optomem/profiles_builtin.hpp"

using namespace optomem;
using consts::c_light;
using consts::hbar;
using consts::pi;
using consts::two_pi;

namespace {

SystemParams moderate_r_params(double r) {
  // TR-model host for exercising the coupling maps at moderate reflectivity.
  SystemParams p = builtin_tr_profile().params;
  p.reflectivity = r;
  p.coupling = 0.0;  // keep the calibration trivially feasible
  p.finalize();
  return p;
}

}  // namespace

TEST_CASE("CC disordered frequencies") {
  const SystemParams p = builtin_cc_profile().params;
  const double wc = p.cavity_freq;

  SUBCASE("no disorder leaves all three at omega_c") {
    const auto w = cc_disordered_frequencies(p, {0.0, 0.0});
    CHECK(w[0] == wc);
    CHECK(w[1] == wc);
    CHECK(w[2] == wc);
  }
  SUBCASE("dq1 = L/300 shifts the inner modes by +-1%") {
    const auto w = cc_disordered_frequencies(p, {p.cavity_length / 300.0, 0.0});
    CHECK(w[0] == doctest::Approx(wc * 0.99).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(wc * 1.01).epsilon(1e-12));
    CHECK(w[2] == doctest::Approx(wc).epsilon(1e-12));
  }
  SUBCASE("telescoping sum") {
    const auto w = cc_disordered_frequencies(p, {3.7e-7, -2.2e-7});
    CHECK(w[0] + w[1] + w[2] == doctest::Approx(3.0 * wc).epsilon(1e-14));
  }
  SUBCASE("bound violation raises a domain error") {
    CHECK_THROWS_AS(cc_disordered_frequencies(p, {p.cavity_length, 0.0}), physics_error);
  }
}

TEST_CASE("CC coupling map") {
  const SystemParams p = moderate_r_params(0.5);
  const double gmax_unit = static_cast<double>(p.mode_index) * pi * c_light /
                           (p.cavity_length * p.cavity_length);

  SUBCASE("nodes give zero coupling") { CHECK(cc_coupling(p, 0.0) == 0.0); }
  SUBCASE("antinode gives n pi c sqrt(r)/L^2") {
    const double q = pi / (4.0 * p.wavenumber);  // cos(2kq) = 0
    CHECK(cc_coupling(p, q) ==
          doctest::Approx(gmax_unit * std::sqrt(0.5)).epsilon(1e-12));
  }
  SUBCASE("transparent membrane gives zero everywhere") {
    const SystemParams p0 = moderate_r_params(0.0);
    for (double q : {1e-8, 3e-7, 1.1e-6}) CHECK(cc_coupling(p0, q) == 0.0);
  }
  SUBCASE("bounded by the envelope n pi c sqrt(r)/(L^2 sqrt(1-r))") {
    const double bound = gmax_unit * std::sqrt(0.5) / std::sqrt(1.0 - 0.5);
    for (int i = 0; i < 50; ++i) {
      const double q = 1e-6 * i / 50.0;
      CHECK(std::abs(cc_coupling(p, q)) <= bound * (1 + 1e-12));
    }
  }
}

TEST_CASE("TR cavity frequency") {
  SUBCASE("r = 0 gives the bare frequency everywhere") {
    const SystemParams p = moderate_r_params(0.0);
    const double bare = static_cast<double>(p.mode_index) * pi * c_light / p.cavity_length;
    CHECK(tr_cavity_frequency(p, 0.031, 0.061) == doctest::Approx(bare).epsilon(1e-15));
    CHECK(static_cast<double>(tr_frequency_shift(p, 1e-7, -2e-7)) == 0.0);
  }
  SUBCASE("transmissive rest positions give omega_c") {
    const SystemParams p = builtin_tr_profile().params;
    const auto [q1, q2] = tr_rest_positions(p);
    CHECK(tr_cavity_frequency(p, q1, q2) == doctest::Approx(p.cavity_freq).epsilon(1e-12));
    CHECK(std::abs(static_cast<double>(tr_frequency_shift(p, 0.0, 0.0))) < 1e-3);
  }
  SUBCASE("periodic in both positions with period pi/k") {
    const SystemParams p = builtin_tr_profile().params;
    const double per = pi / p.wavenumber;
    const auto [q1, q2] = tr_rest_positions(p);
    const double w1 = tr_cavity_frequency(p, q1 + 1.7e-7, q2 + 0.4e-7);
    const double w2 = tr_cavity_frequency(p, q1 + 1.7e-7 + per, q2 + 0.4e-7 + per);
    CHECK(w1 == doctest::Approx(w2).epsilon(1e-10));
  }
  SUBCASE("a dq1 sweep crosses the bare frequency repeatedly") {
    const SystemParams p = builtin_tr_profile().params;
    int sign_changes = 0;
    double prev = static_cast<double>(tr_frequency_shift(p, 0.0, 0.0));
    const double per = pi / p.wavenumber;
    for (int i = 1; i <= 60; ++i) {
      const double cur = static_cast<double>(tr_frequency_shift(p, i * per / 30.0, 0.0));
      if (prev != 0.0 && cur != 0.0 && (prev < 0) != (cur < 0)) ++sign_changes;
      prev = cur;
    }
    CHECK(sign_changes >= 2);
  }
}

TEST_CASE("TR couplings by finite differences") {
  SUBCASE("zero reflectivity gives zero couplings") {
    const SystemParams p = moderate_r_params(0.0);
    const auto g = tr_couplings(p, 1e-8, -1e-8);
    CHECK(static_cast<double>(g.g1) == 0.0);
    CHECK(static_cast<double>(g.g2) == 0.0);
  }
  SUBCASE("calibrated rest reproduces the configured coupling to 1e-4") {
    const SystemParams p = builtin_tr_profile().params;
    const auto g = tr_couplings(p, 0.0, 0.0);
    CHECK(std::abs(static_cast<double>(g.g1)) ==
          doctest::Approx(p.coupling).epsilon(1e-4));
    CHECK(std::abs(static_cast<double>(g.g2)) ==
          doctest::Approx(p.coupling).epsilon(1e-4));
    // Opposite light pressure on the two membranes at the symmetric rest.
    CHECK(static_cast<double>(g.g1) ==
          doctest::Approx(-static_cast<double>(g.g2)).epsilon(1e-10));
  }
  SUBCASE("step refinement converges (Richardson oracle)") {
    const SystemParams p = builtin_tr_profile().params;
    auto fd = [&](Real h) {
      return static_cast<double>(
          (tr_frequency_shift(p, Real(1.3e-8) + h, 0.0) -
           tr_frequency_shift(p, Real(1.3e-8) - h, 0.0)) / (2 * h));
    };
    const Real h0 = Real(1e-6) * Real(pi) / static_cast<Real>(p.wavenumber);
    const double d1 = fd(h0), d2 = fd(h0 / 2);
    CHECK(std::abs(d2 - d1) <= 1e-6 * std::abs(d2));
    const auto g = tr_couplings(p, 1.3e-8, 0.0);
    CHECK(static_cast<double>(g.fd_error) <= 1e-6 * std::abs(static_cast<double>(g.g1)));
  }
}

TEST_CASE("TR steady state") {
  SUBCASE("empty-cavity drive: alpha = 2 eps/kappa, zero displacements") {
    SystemParams p = builtin_tr_profile().params;
    p.coupling = 0.0;
    p.finalize();
    const auto ss = solve_steady_state_tr(p, {0.0, 0.0});
    const double eps = drive_amplitude(p);
    CHECK(static_cast<double>(ss.alpha.real()) ==
          doctest::Approx(2.0 * eps / p.kappa).epsilon(1e-12));
    CHECK(std::abs(static_cast<double>(ss.alpha.imag())) < 1e-9 * eps / p.kappa);
    CHECK(static_cast<double>(ss.q1) == 0.0);
    CHECK(static_cast<double>(ss.q2) == 0.0);
  }
  SUBCASE("undriven cavity is dark") {
    SystemParams p = builtin_tr_profile().params;
    p.laser_power = 0.0;
    p.finalize();
    const auto ss = solve_steady_state_tr(p, {0.0, 0.0});
    CHECK(static_cast<double>(ss.nbar) == 0.0);
  }
  SUBCASE("paper profile: nbar matches a brute-force scan of the photon-number equation") {
    const SystemParams p = builtin_tr_profile().params;
    const auto ss = solve_steady_state_tr(p, {0.0, 0.0});
    const double eps = drive_amplitude(p);
    const double g1 = static_cast<double>(ss.g1), g2 = static_cast<double>(ss.g2);
    const double cshift =
        hbar * (g1 * g1 + g2 * g2) / (p.membrane_mass * p.mech_freq * p.mech_freq);
    auto f = [&](double nb) {
      const double det = p.detuning + cshift * nb;
      return nb * (p.kappa * p.kappa / 4.0 + det * det) - eps * eps;
    };
    const double hi0 = 2.0 * std::pow(2.0 * eps / p.kappa, 2);
    double lo = 0.0, hi = hi0;
    const int grid = 4096;
    for (int i = 1; i <= grid; ++i) {
      const double x = hi0 * i / grid;
      if (f(lo) * f(x) <= 0.0) {
        hi = x;
        break;
      }
      lo = x;
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = (lo + hi) / 2;
      (f(lo) * f(mid) <= 0.0 ? hi : lo) = mid;
    }
    CHECK(static_cast<double>(ss.nbar) == doctest::Approx((lo + hi) / 2).epsilon(1e-10));
    CHECK(static_cast<double>(ss.residual) < 1e-12);
    CHECK(static_cast<double>(ss.q1) ==
          doctest::Approx(hbar * g1 * static_cast<double>(ss.nbar) /
                          (p.membrane_mass * p.mech_freq * p.mech_freq))
              .epsilon(1e-12));
  }
}

TEST_CASE("CC steady state") {
  SUBCASE("decoupled driven cavity: g = 0, J = 0") {
    SystemParams p = builtin_cc_profile().params;
    p.coupling = 0.0;
    p.hopping = 0.0;
    p.detuning = 0.0;
    p.finalize();
    const auto ss = solve_steady_state_cc(p, {0.0, 0.0});
    const double eps = drive_amplitude(p);
    CHECK(static_cast<double>(ss.alpha[0].real()) ==
          doctest::Approx(2.0 * eps / p.kappa1).epsilon(1e-10));
    CHECK(std::abs(ss.alpha[1]) < 1e-12 * std::abs(ss.alpha[0]));
    CHECK(std::abs(ss.alpha[2]) < 1e-12 * std::abs(ss.alpha[0]));
    CHECK(static_cast<double>(ss.q1) == 0.0);
    CHECK(static_cast<double>(ss.q2) == 0.0);
  }
  SUBCASE("g = 0, J > 0 reduces to the complex tridiagonal linear system") {
    SystemParams p = builtin_cc_profile().params;
    p.coupling = 0.0;
    p.finalize();
    const auto ss = solve_steady_state_cc(p, {0.0, 0.0});
    using C = std::complex<double>;
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    const C i1(0, 1);
    m(0, 0) = i1 * p.detuning + p.kappa1 / 2.0;
    m(1, 1) = i1 * p.detuning + p.kappa2 / 2.0;
    m(2, 2) = i1 * p.detuning + p.kappa3 / 2.0;
    m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = i1 * p.hopping;
    Eigen::Vector3cd rhs(C(drive_amplitude(p), 0), C(0, 0), C(0, 0));
    const Eigen::Vector3cd a = m.partialPivLu().solve(rhs);
    for (int j = 0; j < 3; ++j) {
      CHECK(static_cast<double>(ss.alpha[j].real()) ==
            doctest::Approx(a[j].real()).epsilon(1e-9));
      CHECK(static_cast<double>(ss.alpha[j].imag()) ==
            doctest::Approx(a[j].imag()).epsilon(1e-9));
    }
  }
  SUBCASE("paper profile: residual small, all modes populated") {
    const SystemParams p = builtin_cc_profile().params;
    const auto ss = solve_steady_state_cc(p, {0.0, 0.0});
    CHECK(static_cast<double>(ss.residual) < 1e-10);
    double amax = 0.0, amin = 1e300;
    for (const auto& a : ss.alpha) {
      amax = std::max(amax, static_cast<double>(std::abs(a)));
      amin = std::min(amin, static_cast<double>(std::abs(a)));
    }
    CHECK(amax / amin < 10.0);
    const double mw2 = p.membrane_mass * p.mech_freq * p.mech_freq;
    CHECK(static_cast<double>(ss.q1) ==
          doctest::Approx(hbar * static_cast<double>(ss.g1) *
                          (static_cast<double>(std::norm(ss.alpha[1])) -
                           static_cast<double>(std::norm(ss.alpha[0]))) /
                          mw2)
              .epsilon(1e-9));
  }
}

TEST_CASE("dynamical matrix structure") {
  SUBCASE("TR with real alpha: X row decouples from positions") {
    SystemParams p = builtin_tr_profile().params;
    SteadyStateTR ss;
    ss.alpha = CplxR(3.0L, 0.0L);
    ss.g1 = 1e15;
    ss.g2 = -1e15;
    ss.delta = 0.0;
    const auto sys = dynamical_matrix(p, ss);
    CHECK(static_cast<double>(sys.a(0, 4)) == 0.0);
    CHECK(static_cast<double>(sys.a(0, 5)) == 0.0);
    CHECK(static_cast<double>(sys.a(1, 4)) != 0.0);
  }
  SUBCASE("mechanics-only block is the damped oscillator") {
    SystemParams p = builtin_tr_profile().params;
    SteadyStateTR ss;  // zero couplings
    const auto sys = dynamical_matrix(p, ss);
    Eigen::Matrix2d mech;
    mech << static_cast<double>(sys.a(2, 2)), static_cast<double>(sys.a(2, 4)),
        static_cast<double>(sys.a(4, 2)), static_cast<double>(sys.a(4, 4));
    const Eigen::Vector2cd ev = mech.eigenvalues();
    const double gt = p.mech_damping / p.mech_freq;
    CHECK(ev[0].real() == doctest::Approx(-gt / 2).epsilon(1e-9));
    CHECK(std::abs(ev[0].imag()) ==
          doctest::Approx(std::sqrt(1.0 - gt * gt / 4)).epsilon(1e-9));
  }
  SUBCASE("SI export reproduces the printed TR matrix entries") {
    SystemParams p = builtin_tr_profile().params;
    SteadyStateTR ss;
    ss.alpha = CplxR(2.0L, -1.5L);
    ss.g1 = 7.7e14;
    ss.g2 = -3.1e14;
    ss.delta = 1234.5;
    const auto sys = dynamical_matrix(p, ss);
    const Eigen::MatrixXd a = sys.a_si(p);
    const double s2 = std::sqrt(2.0);
    const double ra = 2.0, ia = -1.5;
    CHECK(a(0, 0) == doctest::Approx(-p.kappa / 2).epsilon(1e-12));
    CHECK(a(0, 1) == doctest::Approx(1234.5).epsilon(1e-12));
    CHECK(a(1, 0) == doctest::Approx(-1234.5).epsilon(1e-12));
    CHECK(a(0, 4) == doctest::Approx(s2 * 7.7e14 * ia).epsilon(1e-12));
    CHECK(a(1, 5) == doctest::Approx(-s2 * (-3.1e14) * ra).epsilon(1e-12));
    CHECK(a(2, 0) == doctest::Approx(-s2 * hbar * 7.7e14 * ra).epsilon(1e-12));
    CHECK(a(2, 1) == doctest::Approx(-s2 * hbar * 7.7e14 * ia).epsilon(1e-12));
    CHECK(a(3, 0) == doctest::Approx(-s2 * hbar * (-3.1e14) * ra).epsilon(1e-12));
    CHECK(a(2, 2) == doctest::Approx(-p.mech_damping).epsilon(1e-12));
    CHECK(a(2, 4) ==
          doctest::Approx(-p.membrane_mass * p.mech_freq * p.mech_freq).epsilon(1e-12));
    CHECK(a(4, 2) == doctest::Approx(1.0 / p.membrane_mass).epsilon(1e-12));
    const Eigen::MatrixXd d = sys.d_si(p);
    CHECK(d(0, 0) == doctest::Approx(p.kappa / 2).epsilon(1e-12));
    CHECK(d(2, 2) == doctest::Approx(2.0 * p.membrane_mass * p.mech_damping *
                                     consts::k_boltzmann * p.temperature)
                         .epsilon(1e-12));
    CHECK(d(4, 4) == 0.0);
    CHECK(d(5, 5) == 0.0);
  }
  SUBCASE("SI export reproduces the printed CC blocks, every symbol toggled") {
    SystemParams p = builtin_cc_profile().params;
    SteadyStateCC ss;
    ss.alpha = {CplxR(1.0L, 0.5L), CplxR(-0.7L, 2.0L), CplxR(0.3L, -1.1L)};
    ss.g1 = 5.0e14;
    ss.g2 = 8.0e14;
    ss.delta = {11.0, -22.0, 33.0};
    const auto sys = dynamical_matrix(p, ss);
    const Eigen::MatrixXd a = sys.a_si(p);
    const double s2 = std::sqrt(2.0);
    auto re = [&](int j) { return static_cast<double>(ss.alpha[j].real()); };
    auto im = [&](int j) { return static_cast<double>(ss.alpha[j].imag()); };
    for (int j = 0; j < 3; ++j) {
      CHECK(a(2 * j, 2 * j + 1) ==
            doctest::Approx(static_cast<double>(ss.delta[j])).epsilon(1e-12));
      CHECK(a(2 * j + 1, 2 * j) ==
            doctest::Approx(-static_cast<double>(ss.delta[j])).epsilon(1e-12));
    }
    CHECK(a(0, 0) == doctest::Approx(-p.kappa1 / 2).epsilon(1e-12));
    CHECK(a(2, 2) == doctest::Approx(-p.kappa2 / 2).epsilon(1e-12));
    CHECK(a(4, 4) == doctest::Approx(-p.kappa3 / 2).epsilon(1e-12));
    CHECK(a(0, 3) == doctest::Approx(p.hopping).epsilon(1e-12));
    CHECK(a(1, 2) == doctest::Approx(-p.hopping).epsilon(1e-12));
    CHECK(a(2, 1) == doctest::Approx(p.hopping).epsilon(1e-12));
    CHECK(a(2, 5) == doctest::Approx(p.hopping).epsilon(1e-12));
    CHECK(a(3, 0) == doctest::Approx(-p.hopping).epsilon(1e-12));
    CHECK(a(3, 4) == doctest::Approx(-p.hopping).epsilon(1e-12));
    CHECK(a(4, 3) == doctest::Approx(p.hopping).epsilon(1e-12));
    CHECK(a(5, 2) == doctest::Approx(-p.hopping).epsilon(1e-12));
    CHECK(a(0, 2) == 0.0);
    CHECK(a(0, 4) == 0.0);
    CHECK(a(0, 8) == doctest::Approx(s2 * ss.g1 * im(0)).epsilon(1e-12));
    CHECK(a(1, 8) == doctest::Approx(-s2 * ss.g1 * re(0)).epsilon(1e-12));
    CHECK(a(2, 8) == doctest::Approx(-s2 * ss.g1 * im(1)).epsilon(1e-12));
    CHECK(a(3, 8) == doctest::Approx(s2 * ss.g1 * re(1)).epsilon(1e-12));
    CHECK(a(2, 9) == doctest::Approx(s2 * ss.g2 * im(1)).epsilon(1e-12));
    CHECK(a(3, 9) == doctest::Approx(-s2 * ss.g2 * re(1)).epsilon(1e-12));
    CHECK(a(4, 9) == doctest::Approx(-s2 * ss.g2 * im(2)).epsilon(1e-12));
    CHECK(a(5, 9) == doctest::Approx(s2 * ss.g2 * re(2)).epsilon(1e-12));
    CHECK(a(0, 9) == 0.0);
    CHECK(a(4, 8) == 0.0);
    CHECK(a(6, 0) == doctest::Approx(-s2 * hbar * ss.g1 * re(0)).epsilon(1e-12));
    CHECK(a(6, 1) == doctest::Approx(-s2 * hbar * ss.g1 * im(0)).epsilon(1e-12));
    CHECK(a(6, 2) == doctest::Approx(s2 * hbar * ss.g1 * re(1)).epsilon(1e-12));
    CHECK(a(6, 3) == doctest::Approx(s2 * hbar * ss.g1 * im(1)).epsilon(1e-12));
    CHECK(a(6, 4) == 0.0);
    CHECK(a(7, 2) == doctest::Approx(-s2 * hbar * ss.g2 * re(1)).epsilon(1e-12));
    CHECK(a(7, 4) == doctest::Approx(s2 * hbar * ss.g2 * re(2)).epsilon(1e-12));
    CHECK(a(7, 0) == 0.0);
    CHECK(a(6, 6) == doctest::Approx(-p.mech_damping).epsilon(1e-12));
    CHECK(a(6, 8) ==
          doctest::Approx(-p.membrane_mass * p.mech_freq * p.mech_freq).epsilon(1e-12));
    CHECK(a(8, 6) == doctest::Approx(1.0 / p.membrane_mass).epsilon(1e-12));
    CHECK(a(9, 7) == doctest::Approx(1.0 / p.membrane_mass).epsilon(1e-12));
    const auto& dd = sys.d;
    CHECK(static_cast<double>(dd.row(8).norm()) == 0.0);
    CHECK(static_cast<double>(dd.row(9).norm()) == 0.0);
    CHECK(static_cast<double>(dd(2, 2)) ==
          doctest::Approx(p.kappa2 / 2 / p.mech_freq).epsilon(1e-12));
  }
}

TEST_CASE("stability check") {
  SUBCASE("diagonal stable") {
    RMat a(2, 2);
    a << -1, 0, 0, -2;
    CHECK(check_stability(a).stable);
  }
  SUBCASE("positive diagonal entry reported") {
    RMat a(2, 2);
    a << 1, 0, 0, -2;
    const auto rep = check_stability(a);
    CHECK_FALSE(rep.stable);
    CHECK(rep.max_real_part == doctest::Approx(1.0));
  }
  SUBCASE("paper profiles are stable") {
    {
      const SystemParams p = builtin_tr_profile().params;
      const auto sys = dynamical_matrix(p, solve_steady_state_tr(p, {0.0, 0.0}));
      CHECK(check_stability(sys.a).stable);
    }
    {
      const SystemParams p = builtin_cc_profile().params;
      const auto sys = dynamical_matrix(p, solve_steady_state_cc(p, {0.0, 0.0}));
      CHECK(check_stability(sys.a).stable);
    }
  }
}
