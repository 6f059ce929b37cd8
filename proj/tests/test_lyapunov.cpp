#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "optomem/lyapunov.hpp"
#include "optomem/models.hpp"
#include "optomem/profiles_builtin.hpp"

using namespace optomem;

namespace {

// Seeded random stable system: spectrum shifted left of -margin.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> random_stable_system(std::mt19937_64& rng, int n,
                                                                 double margin = 0.3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(n, n), m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a(i, j) = u(rng);
      m(i, j) = u(rng);
    }
  const double shift = Eigen::EigenSolver<Eigen::MatrixXd>(a).eigenvalues().real().maxCoeff();
  a -= (shift + margin + 0.2 * std::abs(u(rng))) * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd d = m * m.transpose();
  return {a, d};
}

// Quadrature oracle: sigma = int_0^inf exp(At) D exp(A^T t) dt by composite
// Gauss-Legendre, panels doubled until the result settles.
Eigen::MatrixXd integral_oracle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& d,
                                double rel_tol = 1e-9) {
  const int n = static_cast<int>(a.rows());
  const double decay =
      -Eigen::EigenSolver<Eigen::MatrixXd>(a).eigenvalues().real().maxCoeff();
  const double t_end = 40.0 / decay;

  // 20-node Gauss-Legendre abscissas/weights on [-1, 1].
  static const double xs[10] = {0.0765265211334973, 0.2277858511416451, 0.3737060887154195,
                                0.5108670019508271, 0.6360536807265150, 0.7463319064601508,
                                0.8391169718222188, 0.9122344282513259, 0.9639719272779138,
                                0.9931285991850949};
  static const double ws[10] = {0.1527533871307258, 0.1491729864726037, 0.1420961093183820,
                                0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
                                0.0832767415767048, 0.0626720483341091, 0.0406014298003869,
                                0.0176140071391521};

  Eigen::MatrixXd prev = Eigen::MatrixXd::Zero(n, n);
  for (int panels = 16; panels <= 256; panels *= 2) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
    const double hstep = t_end / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double c = (pnl + 0.5) * hstep;
      for (int q = 0; q < 10; ++q) {
        for (double sgn : {-1.0, 1.0}) {
          const double t = c + sgn * xs[q] * hstep / 2.0;
          const Eigen::MatrixXd e = (a * t).exp();
          acc += (ws[q] * hstep / 2.0) * e * d * e.transpose();
        }
      }
    }
    if (panels > 16 && (acc - prev).norm() <= rel_tol * acc.norm()) return acc;
    prev = acc;
  }
  return prev;
}

}  // namespace

TEST_CASE("decoupled scalar Lyapunov: A=diag(-1,-2), D=diag(4,8) -> sigma=diag(2,2)") {
  DenseMatrix<double> a(2, 2), d(2, 2);
  a << -1, 0, 0, -2;
  d << 4, 0, 0, 8;
  const auto sol = solve_lyapunov<double>(a, d);
  CHECK(sol.sigma(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sol.sigma(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(sol.sigma(0, 1)) < 1e-14);
}

TEST_CASE("zero diffusion gives zero covariance") {
  DenseMatrix<double> a(3, 3);
  a << -1, 0.5, 0, -0.2, -2, 0.1, 0, 0.3, -1.5;
  const auto sol = solve_lyapunov<double>(a, DenseMatrix<double>::Zero(3, 3));
  CHECK(sol.sigma.norm() < 1e-14);
}

TEST_CASE("unstable input rejected before the solve") {
  DenseMatrix<double> a(2, 2);
  a << 1, 0, 0, -2;
  DenseMatrix<double> d = DenseMatrix<double>::Identity(2, 2);
  CHECK_THROWS_AS(solve_lyapunov<double>(a, d), physics_error);
}

TEST_CASE("random stable systems: residual, symmetry, Kronecker cross-check") {
  std::mt19937_64 rng(777001);
  for (int rep = 0; rep < 12; ++rep) {
    const int n = (rep % 2) ? 10 : 6;
    auto [a, d] = random_stable_system(rng, n);
    const auto sol = solve_lyapunov<double>(a, d);
    CHECK(sol.residual < 1e-12);
    CHECK((sol.sigma - sol.sigma.transpose()).norm() < 1e-12 * sol.sigma.norm());

    // Independent route: vec(sigma) from (I (x) A + A (x) I) vec(sigma) = -vec(D).
    Eigen::MatrixXd big = Eigen::MatrixXd::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          big(i + n * j, k + n * j) += a(i, k);   // A sigma
          big(i + n * j, i + n * k) += a(j, k);   // sigma A^T
        }
    Eigen::VectorXd vecd(n * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) vecd(i + n * j) = -d(i, j);
    const Eigen::VectorXd vs = big.fullPivLu().solve(vecd);
    Eigen::MatrixXd ref(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) ref(i, j) = vs(i + n * j);
    CHECK((sol.sigma - ref).norm() <= 1e-9 * ref.norm());
  }
}

TEST_CASE("quadrature oracle: sigma = int exp(At) D exp(A^T t) dt") {
  std::mt19937_64 rng(777002);
  for (int rep = 0; rep < 4; ++rep) {
    const int n = (rep % 2) ? 10 : 6;
    auto [a, d] = random_stable_system(rng, n);
    const auto sol = solve_lyapunov<double>(a, d);
    const Eigen::MatrixXd oracle = integral_oracle(a, d);
    CHECK((sol.sigma - oracle).norm() <= 1e-8 * oracle.norm());
  }
}

TEST_CASE("long double path matches double on well-conditioned systems") {
  std::mt19937_64 rng(777003);
  auto [a, d] = random_stable_system(rng, 6);
  const auto sd = solve_lyapunov<double>(a, d);
  const auto sl = solve_lyapunov<long double>(a.cast<long double>(), d.cast<long double>());
  CHECK((sl.sigma.cast<double>() - sd.sigma).norm() <= 1e-12 * sd.sigma.norm());
  CHECK(static_cast<double>(sl.residual) < 1e-15);
}

TEST_CASE("condition estimate flags a nearly defective operator") {
  DenseMatrix<double> a(2, 2);
  a << -1e-8, 0, 0, -1.0;
  DenseMatrix<double> d = DenseMatrix<double>::Identity(2, 2);
  const auto sol = solve_lyapunov<double>(a, d);
  CHECK(sol.condition_estimate > 1e7);
  CHECK(sol.sigma(0, 0) == doctest::Approx(0.5e8).epsilon(1e-9));
}

TEST_CASE("paper-profile systems meet the spec residual bound in long double") {
  // The acceptance pipeline relies on this: thermal variances ~1e5 against
  // damping ~1e-8 keep the double-precision residual near 1e-8.
  const ExperimentConfig tr = builtin_tr_profile();
  const auto ss = solve_steady_state_tr(tr.params, {0.0, 0.0});
  const auto sys = dynamical_matrix(tr.params, ss);
  const auto sol = solve_lyapunov<Real>(sys.a, sys.d);
  CHECK(static_cast<double>(sol.residual) < 1e-10);
}
