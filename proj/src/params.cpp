#include "optomem/params.hpp"

#include <cmath>

namespace optomem {

using consts::c_light;
using consts::hbar;
using consts::pi;

std::string to_string(Model m) { return m == Model::CC ? "CC" : "TR"; }

Model model_from_string(const std::string& s) {
  if (s == "CC" || s == "cc") return Model::CC;
  if (s == "TR" || s == "tr") return Model::TR;
  throw config_error("unknown model '" + s + "' (expected CC or TR)");
}

std::string to_string(CovarianceMode m) {
  return m == CovarianceMode::Verbatim ? "verbatim" : "vacuum_consistent";
}

CovarianceMode covariance_mode_from_string(const std::string& s) {
  if (s == "verbatim") return CovarianceMode::Verbatim;
  if (s == "vacuum_consistent" || s == "vacuum") return CovarianceMode::VacuumConsistent;
  throw config_error("unknown covariance_mode '" + s + "'");
}

UnitScale UnitScale::from_mechanics(double mass, double omega_m) {
  UnitScale u;
  u.x_zpf = std::sqrt(hbar / (2.0 * mass * omega_m));
  u.p_zpf = std::sqrt(hbar * mass * omega_m / 2.0);
  u.time_scale = 1.0 / omega_m;
  return u;
}

double drive_amplitude(const SystemParams& p) {
  const double kap = p.model == Model::CC ? p.kappa1 : p.kappa;
  if (kap <= 0.0) throw config_error("drive_amplitude: kappa must be positive");
  if (p.laser_freq <= 0.0) throw config_error("drive_amplitude: laser_freq must be positive");
  if (p.laser_power < 0.0) throw config_error("drive_amplitude: laser_power must be non-negative");
  return std::sqrt(2.0 * kap * p.laser_power / (hbar * p.laser_freq));
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw config_error(what);
}

// TR rest geometry: membranes at the transmissive spacing L/3 with a common
// pair offset s0 chosen so |dOmega_c/dq_i| at rest equals the configured g.
// At rest |g_i| = pref * (1 - (-1)^(n/3) cos(k s0)), pref = 2 k sqrt(r) c / (L (1-r)).
double calibrate_tr_offset_phase(const SystemParams& p) {
  const double k = p.wavenumber;
  const double r = p.reflectivity;
  if (r == 0.0) {
    require(p.coupling == 0.0,
            "TR calibration: reflectivity 0 forces zero coupling, configured coupling is nonzero");
    return 0.0;
  }
  const double pref = 2.0 * k * std::sqrt(r) * c_light / (p.cavity_length * (1.0 - r));
  const double target = p.coupling / pref;
  require(target <= 2.0 + 1e-12,
          "TR calibration: coupling exceeds the attainable maximum 2*k*sqrt(r)*c/(L*(1-r))*2");
  const double par = ((p.mode_index / 3) % 2 != 0) ? -1.0 : 1.0;
  double cosval = par * (1.0 - target);
  if (cosval > 1.0) cosval = 1.0;
  if (cosval < -1.0) cosval = -1.0;
  return std::acos(cosval);  // k*s0 in [0, pi]
}

// CC rest phase chi0 = 2 k q0 solving g(q0) = g for the printed coupling map
// g(q) = (n pi c / L^2) sqrt(r) sin(2kq) / sqrt(1 - r cos^2(2kq)).
double calibrate_cc_phase(const SystemParams& p) {
  const double r = p.reflectivity;
  const double gmax_unit = static_cast<double>(p.mode_index) * pi * c_light /
                           (p.cavity_length * p.cavity_length);
  if (r == 0.0) {
    require(p.coupling == 0.0, "CC calibration: reflectivity 0 forces zero coupling");
    return 0.0;
  }
  const double t = p.coupling / gmax_unit;  // = sqrt(r) s / sqrt(1 - r(1-s^2))
  require(t <= std::sqrt(r) * (1.0 + 1e-12),
          "CC calibration: coupling exceeds the plateau value n pi c sqrt(r)/L^2");
  const double t2 = t * t;
  double s2 = t2 * (1.0 - r) / (r * (1.0 - t2));
  if (s2 > 1.0) s2 = 1.0;
  return std::asin(std::sqrt(s2));  // chi0 in [0, pi/2]
}

}  // namespace

void SystemParams::finalize() {
  require(cavity_length > 0.0, "cavity_length must be positive");
  require(membrane_mass > 0.0, "membrane_mass must be positive");
  require(mech_freq > 0.0, "mech_freq must be positive");
  require(mech_damping > 0.0, "mech_damping must be positive");
  require(reflectivity >= 0.0 && reflectivity < 1.0, "reflectivity must lie in [0,1)");
  require(temperature > 0.0, "temperature must be positive");
  require(laser_power >= 0.0, "laser_power must be non-negative");
  require(mode_index > 0, "mode_index must be a positive integer");
  require(mode_index % 3 == 0,
          "mode_index must be divisible by 3 (three equal inner cavities: omega = 3 (n/3) pi c / L)");
  require(coupling >= 0.0, "coupling must be non-negative");

  if (model == Model::CC) {
    require(kappa1 > 0.0 && kappa2 > 0.0 && kappa3 > 0.0,
            "CC model requires positive kappa1, kappa2, kappa3");
    require(hopping > 0.0, "CC model requires positive hopping J");
    kappa = kappa1;
  } else {
    require(kappa > 0.0, "TR model requires positive kappa");
    kappa1 = kappa2 = kappa3 = kappa;
  }

  wavenumber = static_cast<double>(mode_index) * pi / cavity_length;
  const double wc = static_cast<double>(mode_index) * pi * c_light / cavity_length;
  if (cavity_freq > 0.0) {
    require(std::abs(cavity_freq - wc) <= 1e-6 * wc,
            "cavity_freq inconsistent with mode_index (omega_c = n pi c / L)");
  }
  cavity_freq = wc;
  laser_freq = cavity_freq - detuning;
  require(laser_freq > 0.0, "derived laser_freq must be positive");

  scale = UnitScale::from_mechanics(membrane_mass, mech_freq);

  rest_phase_sum = (model == Model::TR) ? calibrate_tr_offset_phase(*this) : 0.0;
  rest_phase_cc = (model == Model::CC) ? calibrate_cc_phase(*this) : 0.0;
}

void validate_disorder(const SystemParams& p, const Disorder& d) {
  const double bound = p.max_disorder_fraction * p.cavity_length;
  if (std::abs(d.dq1) >= bound || std::abs(d.dq2) >= bound)
    throw physics_error("disorder exceeds validity bound |dq| < " +
                        std::to_string(bound) + " m");
}

void DetectionSettings::validate() const {
  if (detection_window <= 0.0) throw config_error("detection_window must be positive");
  if (detector_efficiency <= 0.0 || detector_efficiency > 1.0)
    throw config_error("detector_efficiency must lie in (0,1]");
}

}  // namespace optomem
