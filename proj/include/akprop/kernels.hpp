#pragma once

#include "akprop/special.hpp"

namespace akprop {

/// A point on the boundary of the continuous spectrum together with the
/// kernel arguments: dimension, branch (lambda^2 +- i0), frequency lambda,
/// separation r = |x - y|.
struct SpectralPoint {
  int d = 1;
  Branch branch = Branch::plus;
  double lambda = 1.0;
  double r = 0.0;
};

/// Plus-branch components of the d = 2 kernel splits at z = lambda * r.
/// The minus-branch resolvent weights are the conjugates and the
/// minus-branch difference components are the negated conjugates.
struct SplitWeights {
  cplx w_greater{};  // supported on z >= 1/2
  cplx w_less{};     // supported on z <= 1
  cplx j_greater{};
  cplx j_less{};
  double z = 0.0;
};

struct LowEnergyValue {
  cplx value{};
  double remainder_bound = 0.0;
};

/// Kernel of the free resolvent boundary value at lambda^2 +- i0.
/// d in {1,2,3} or odd d >= 5; r > 0 required for d >= 2.
cplx free_resolvent_kernel(const SpectralPoint& p);

/// Kernel of R_0^+(lambda^2) - R_0^-(lambda^2); finite at r = 0.
cplx resolvent_difference_kernel(int d, double lambda, double r);

/// Truncated kernel expansion near lambda = 0 (valid for 0 < lambda < 1)
/// together with a calibrated majorant of the dropped remainder.
LowEnergyValue low_energy_expansion(const SpectralPoint& p);

/// Kernel of e^{it Laplacian} at separation r, t > 0.
cplx free_propagator_kernel(int d, double t, double r);

/// Split of the d = 2 resolvent and difference kernels into an oscillatory
/// far factor and a compactly supported near factor.
SplitWeights d2_kernel_split(double lambda, double r);

void validate_spectral_point(const SpectralPoint& p);

}  // namespace akprop
