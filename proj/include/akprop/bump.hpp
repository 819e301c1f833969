#pragma once

#include <cmath>

namespace akprop {

/// C-infinity step: 0 for u <= 0, 1 for u >= 1, strictly monotone between.
inline double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double a = std::exp(-1.0 / u);
  double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

/// Smooth plateau: 1 on |z| <= inner, 0 on |z| >= outer.
inline double plateau(double z, double inner, double outer) {
  return smooth_step((outer - std::abs(z)) / (outer - inner));
}

/// The bump of the kernel split: 1 on |z| < 1/2, 0 on |z| > 1.
inline double unit_plateau(double z) { return plateau(z, 0.5, 1.0); }

/// Low-energy cutoff: 1 below lambda0/2, 0 above lambda0.
inline double low_energy_cutoff(double lambda, double lambda0) {
  return plateau(lambda, 0.5 * lambda0, lambda0);
}

}  // namespace akprop
