#pragma once

#include "optomem/config.hpp"

namespace optomem {

/// Experiment-derived profile for the transmissive-regime model: membrane
/// parameters from the three-mode sandwich experiment (kappa/2pi = 83 kHz,
/// g/2pi = 0.30 Hz, gamma/2pi = 1.64 Hz, omega_m/2pi = 235.81 MHz, m = 0.72 ng,
/// r = 0.33, T = 300 K, P = 130 uW), a 9 cm cavity at a 1064 nm-class mode and
/// zero base detuning. tau = 1/kappa, eta = 1, theta = pi/2.
ExperimentConfig builtin_tr_profile();

/// Coupled-cavities profile: same membranes with high-reflectivity coatings
/// (r -> 1), hopping J/2pi = 200 kHz, kappa2 = kappa/100, rest positions at
/// the coupling-map antinode with the cavity length chosen so the plateau
/// coupling matches g/2pi = 0.30 Hz, and base detuning -0.9 J (the detuning is
/// not stated in the source experiment). tau = 1/kappa, eta = 1, theta = 0.
ExperimentConfig builtin_cc_profile();

}  // namespace optomem
