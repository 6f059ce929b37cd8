#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "optomem/config.hpp"
#include "optomem/constants.hpp"
#include "optomem/profiles_builtin.hpp"
#include "optomem/scaling.hpp"

using namespace optomem;
using consts::hbar;
using consts::pi;
using consts::two_pi;

TEST_CASE("zero-point scales satisfy x_zpf * p_zpf = hbar/2") {
  const UnitScale u = UnitScale::from_mechanics(0.72e-12, two_pi * 235.81e6);
  CHECK(u.x_zpf * u.p_zpf == doctest::Approx(hbar / 2).epsilon(1e-15));
  CHECK(u.time_scale == doctest::Approx(1.0 / (two_pi * 235.81e6)).epsilon(1e-15));
}

TEST_CASE("drive amplitude") {
  ExperimentConfig cfg = builtin_tr_profile();
  SystemParams p = cfg.params;

  SUBCASE("zero power gives zero drive") {
    p.laser_power = 0.0;
    CHECK(drive_amplitude(p) == 0.0);
  }
  SUBCASE("independent evaluation of the formula") {
    const long double k = 2.0L * 3.14159265358979323846L * 83000.0L;
    const long double pw = 130e-6L;
    const long double wl = static_cast<long double>(p.laser_freq);
    const long double expected = std::sqrt(2.0L * k * pw / (1.054571817e-34L * wl));
    CHECK(drive_amplitude(p) == doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
  }
  SUBCASE("doubling the power scales the drive by sqrt(2)") {
    const double e1 = drive_amplitude(p);
    p.laser_power *= 2.0;
    CHECK(drive_amplitude(p) == doctest::Approx(std::sqrt(2.0) * e1).epsilon(1e-14));
  }
  SUBCASE("epsilon^2 is linear in P with slope 2 kappa/(hbar omega_L)") {
    const double slope = 2.0 * p.kappa / (hbar * p.laser_freq);
    for (double pw : {10e-6, 50e-6, 200e-6}) {
      p.laser_power = pw;
      const double e = drive_amplitude(p);
      CHECK(e * e == doctest::Approx(slope * pw).epsilon(1e-12));
    }
  }
  SUBCASE("non-positive kappa rejected") {
    p.kappa = 0.0;
    CHECK_THROWS_AS(drive_amplitude(p), config_error);
  }
}

TEST_CASE("matrix scaling layer") {
  ExperimentConfig cfg = builtin_tr_profile();
  const SystemParams& p = cfg.params;

  SUBCASE("identity scales leave a matrix unchanged") {
    SystemParams q = p;
    q.scale.x_zpf = q.scale.p_zpf = 1.0;
    q.mech_freq = 1.0;
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(6, 6);
    CHECK((to_dimensionless(q, m, MatrixKind::Covariance) - m).norm() == 0.0);
    CHECK((to_dimensionless(q, m, MatrixKind::Dynamical) - m).norm() == 0.0);
  }
  SUBCASE("a position variance of x_zpf^2 becomes 1") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
    m(4, 4) = p.scale.x_zpf * p.scale.x_zpf;
    const auto md = to_dimensionless(p, m, MatrixKind::Covariance);
    CHECK(md(4, 4) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("round trip is the identity to 1e-12 relative") {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::MatrixXd m(6, 6);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(rng);
      for (auto kind : {MatrixKind::Covariance, MatrixKind::Dynamical}) {
        const auto back = from_dimensionless(p, to_dimensionless(p, m, kind), kind);
        CHECK((back - m).norm() <= 1e-12 * m.norm());
      }
    }
  }
  SUBCASE("dimension mismatch raises a shape error") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(5, 5);
    CHECK_THROWS_AS(to_dimensionless(p, m, MatrixKind::Covariance), numerics_error);
    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(6, 5);
    CHECK_THROWS_AS(to_dimensionless(p, m2, MatrixKind::Covariance), numerics_error);
  }
  SUBCASE("Fisher conversion divides by x_zpf^2") {
    Eigen::Matrix2d h;
    h << 4.0, 1.0, 1.0, 2.0;
    const auto hsi = fisher_to_si(p, h);
    CHECK(hsi(0, 0) == doctest::Approx(4.0 / (p.scale.x_zpf * p.scale.x_zpf)));
  }
}

TEST_CASE("parameter validation") {
  ExperimentConfig cfg = builtin_tr_profile();

  SUBCASE("reflectivity bounds") {
    SystemParams p = cfg.params;
    p.reflectivity = 1.0;
    CHECK_THROWS_AS(p.finalize(), config_error);
  }
  SUBCASE("mode index must be positive and divisible by 3") {
    SystemParams p = cfg.params;
    p.mode_index = 169172;
    CHECK_THROWS_AS(p.finalize(), config_error);
    p.mode_index = -3;
    CHECK_THROWS_AS(p.finalize(), config_error);
  }
  SUBCASE("disorder bound") {
    CHECK_THROWS_AS(validate_disorder(cfg.params, {0.02, 0.0}), physics_error);
    CHECK_NOTHROW(validate_disorder(cfg.params, {1e-6, -1e-6}));
  }
  SUBCASE("detection settings") {
    DetectionSettings det = cfg.detection;
    det.detector_efficiency = 1.5;
    CHECK_THROWS_AS(det.validate(), config_error);
    det.detector_efficiency = 1.0;
    det.detection_window = 0.0;
    CHECK_THROWS_AS(det.validate(), config_error);
  }
  SUBCASE("cavity_freq cross-check against mode_index") {
    SystemParams p = cfg.params;
    p.cavity_freq = p.cavity_freq * 1.001;
    CHECK_THROWS_AS(p.finalize(), config_error);
  }
}

TEST_CASE("calibration reproduces the configured coupling scale") {
  const ExperimentConfig tr = builtin_tr_profile();
  CHECK(tr.params.coupling * tr.params.scale.x_zpf / two_pi ==
        doctest::Approx(0.30).epsilon(1e-12));

  const ExperimentConfig cc = builtin_cc_profile();
  CHECK(cc.params.coupling * cc.params.scale.x_zpf / two_pi ==
        doctest::Approx(0.30).epsilon(1e-12));
  // The CC rest phase sits on the high-reflectivity plateau of the coupling
  // map: the map value matches the configured coupling and is locally flat.
  const double r = cc.params.reflectivity;
  const double chi = cc.params.rest_phase_cc;
  const double plateau = static_cast<double>(cc.params.mode_index) * pi *
                         consts::c_light /
                         (cc.params.cavity_length * cc.params.cavity_length);
  const double gval = plateau * std::sqrt(r) * std::sin(chi) /
                      std::sqrt(1.0 - r * std::cos(chi) * std::cos(chi));
  CHECK(gval == doctest::Approx(cc.params.coupling).epsilon(1e-10));
  const double slope = plateau * (1.0 - r) * std::cos(chi) /
                       std::pow(1.0 - r * std::cos(chi) * std::cos(chi), 1.5);
  CHECK(std::abs(slope) < 1e-12 * cc.params.coupling);  // flat: disorder leaves g unchanged
}

TEST_CASE("INI parsing") {
  SUBCASE("values, sections, comments") {
    const IniFile ini = IniFile::parse_string(
        "# comment\n[system]\nmodel = TR ; trailing\n\ncavity_length = 0.09\n[detection]\n"
        "lo_phase = 1.5\n");
    CHECK(ini.get_string("system.model") == "TR");
    CHECK(ini.get_double("system.cavity_length") == 0.09);
    CHECK(ini.get_double("detection.lo_phase") == 1.5);
  }
  SUBCASE("parse errors carry line and key") {
    const IniFile ini = IniFile::parse_string("[system]\ncavity_length = abc\n");
    try {
      ini.get_double("system.cavity_length");
      FAIL("expected config_error");
    } catch (const config_error& e) {
      const std::string msg = e.what();
      CHECK(msg.find("cavity_length") != std::string::npos);
      CHECK(msg.find(":2") != std::string::npos);
    }
  }
  SUBCASE("missing key names the key") {
    const IniFile ini = IniFile::parse_string("[system]\n");
    CHECK_THROWS_WITH_AS(ini.get_double("system.kappa"),
                         doctest::Contains("system.kappa"), config_error);
  }
  SUBCASE("duplicate keys rejected") {
    CHECK_THROWS_AS(IniFile::parse_string("[a]\nx = 1\nx = 2\n"), config_error);
  }
  SUBCASE("unknown config key is rejected by the typed loader") {
    const IniFile ini = IniFile::parse_string("[system]\nmodl = TR\n");
    CHECK_THROWS_WITH_AS(experiment_config_from_ini(ini), doctest::Contains("modl"),
                         config_error);
  }
  SUBCASE("detuning and laser_freq are mutually exclusive") {
    const IniFile ini = IniFile::parse_string(
        "[system]\nmodel = TR\ndetuning = 0\nlaser_freq = 1e15\n");
    CHECK_THROWS_AS(experiment_config_from_ini(ini), config_error);
  }
}

TEST_CASE("shipped profiles match the built-in definitions") {
  const ExperimentConfig tr_file = load_experiment_config(OPTOMEM_SOURCE_DIR "/profiles/tr_paper.ini");
  const ExperimentConfig tr = builtin_tr_profile();
  CHECK(tr_file.params.coupling == tr.params.coupling);
  CHECK(tr_file.params.mode_index == tr.params.mode_index);
  CHECK(tr_file.params.rest_phase_sum == tr.params.rest_phase_sum);
  CHECK(tr_file.detection.lo_phase == tr.detection.lo_phase);

  const ExperimentConfig cc_file = load_experiment_config(OPTOMEM_SOURCE_DIR "/profiles/cc_paper.ini");
  const ExperimentConfig cc = builtin_cc_profile();
  CHECK(cc_file.params.cavity_length == cc.params.cavity_length);
  CHECK(cc_file.params.detuning == cc.params.detuning);
  CHECK(cc_file.params.rest_phase_cc == cc.params.rest_phase_cc);
  CHECK(cc_file.params.kappa2 == cc.params.kappa2);
}
