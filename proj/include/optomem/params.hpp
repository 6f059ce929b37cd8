#pragma once

#include <cmath>
#include <string>

#include "optomem/constants.hpp"
#include "optomem/errors.hpp"

namespace optomem {

enum class Model { CC, TR };

std::string to_string(Model m);
Model model_from_string(const std::string& s);

/// Zero-point scales of the mechanical oscillator; the internal unit system
/// measures positions in x_zpf, momenta in p_zpf and time in 1/omega_m.
struct UnitScale {
  double x_zpf = 0.0;   // sqrt(hbar/(2 m omega_m)), m
  double p_zpf = 0.0;   // sqrt(hbar m omega_m/2), kg m/s
  double time_scale = 0.0;  // 1/omega_m, s

  static UnitScale from_mechanics(double mass, double omega_m);
};

/// All physical constants and experimental settings of one configuration.
/// Rates are angular (rad/s); lengths and masses SI.
struct SystemParams {
  Model model = Model::TR;

  double cavity_length = 0.0;   // L, m
  double membrane_mass = 0.0;   // m, kg
  double mech_freq = 0.0;       // omega_m, rad/s
  double mech_damping = 0.0;    // gamma, 1/s
  // TR uses kappa only; CC uses kappa1..kappa3.
  double kappa = 0.0;
  double kappa1 = 0.0, kappa2 = 0.0, kappa3 = 0.0;
  double coupling = 0.0;        // g, rad/s/m (base optomechanical coupling)
  double hopping = 0.0;         // J, rad/s (CC only)
  double reflectivity = 0.0;    // r in [0,1)
  double temperature = 0.0;     // T, K
  double laser_power = 0.0;     // P, W
  long long mode_index = 0;     // n (global index; omega_c = n pi c / L)
  double detuning = 0.0;        // Delta_0 = omega_c - omega_L at rest, rad/s

  // Derived at finalize():
  double cavity_freq = 0.0;     // omega_c = n pi c / L, rad/s
  double laser_freq = 0.0;      // omega_L = omega_c - detuning, rad/s
  double wavenumber = 0.0;      // k = n pi / L, 1/m
  // Calibrated rest geometry, stored as reduced phases (exact trig arguments):
  // TR: k*(q1+q2) = n*pi + rest_phase_sum at rest, spacing k*(q2-q1) = (n/3)*pi.
  // CC: 2*k*q_i = rest_phase_cc for both membranes.
  double rest_phase_sum = 0.0;  // k*s0 (TR)
  double rest_phase_cc = 0.0;   // chi0 (CC)
  UnitScale scale;

  double max_disorder_fraction = 0.1;  // |dq| < fraction * L

  /// Validates fields, derives cavity/laser frequencies and the rest-geometry
  /// calibration. Throws config_error on inconsistent input.
  void finalize();

  bool finalized() const { return scale.x_zpf > 0.0; }
  double output_kappa() const { return model == Model::CC ? kappa3 : kappa; }
};

/// The two-parameter static shifts of the membrane rest positions.
struct Disorder {
  double dq1 = 0.0;  // m
  double dq2 = 0.0;  // m
};

void validate_disorder(const SystemParams& p, const Disorder& d);

enum class CovarianceMode { Verbatim, VacuumConsistent };

std::string to_string(CovarianceMode m);
CovarianceMode covariance_mode_from_string(const std::string& s);

/// Homodyne detection settings.
struct DetectionSettings {
  double detection_window = 0.0;   // tau, s
  double filter_freq = 0.0;        // Omega_l, rad/s
  double detector_efficiency = 1.0;  // eta in (0,1]
  double lo_phase = 0.0;           // theta, rad
  CovarianceMode mode = CovarianceMode::Verbatim;

  void validate() const;
};

/// Drive amplitude epsilon = sqrt(2 kappa P / (hbar omega_L)), 1/s.
double drive_amplitude(const SystemParams& p);

}  // namespace optomem
