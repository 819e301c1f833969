#include "akprop/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "akprop/bump.hpp"

namespace akprop {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Polynomial part of the odd-dimension kernel:
//   sum_{k=0}^{(d-3)/2} (d-3-k)! / (k! ((d-3)/2 - k)!) * u^k,  u = -+ 2i lambda r.
cplx odd_kernel_polynomial(int d, cplx u) {
  const int m = (d - 3) / 2;
  cplx sum = 0.0;
  cplx upow = 1.0;
  for (int k = 0; k <= m; ++k) {
    sum += factorial(d - 3 - k) / (factorial(k) * factorial(m - k)) * upow;
    upow *= u;
  }
  return sum;
}

}  // namespace

void validate_spectral_point(const SpectralPoint& p) {
  const bool dim_ok = p.d == 1 || p.d == 2 || p.d == 3 || (p.d >= 5 && p.d % 2 == 1);
  if (!dim_ok) throw std::domain_error("kernel: dimension must be 1, 2, 3 or odd >= 5");
  if (!(p.lambda > 0.0)) throw std::domain_error("kernel: lambda must be positive");
  if (p.r < 0.0) throw std::domain_error("kernel: separation must be nonnegative");
  if (p.d >= 2 && p.r == 0.0)
    throw std::domain_error("kernel: singular at r = 0 for d >= 2");
}

cplx free_resolvent_kernel(const SpectralPoint& p) {
  validate_spectral_point(p);
  const int s = branch_sign(p.branch);
  const double u = p.lambda * p.r;
  switch (p.d) {
    case 1:
      return cplx(0.0, s * 0.5 / p.lambda) * expi(s * u);
    case 2:
      return cplx(0.0, s * 0.25) * hankel_h0(p.branch, u);
    case 3:
      return expi(s * u) / (4.0 * kPi * p.r);
    default: {
      const double cd = std::pow(4.0 * kPi, -(p.d - 1) / 2);
      const cplx poly = odd_kernel_polynomial(p.d, cplx(0.0, -s * 2.0 * u));
      return cd * expi(s * u) * poly / std::pow(p.r, p.d - 2);
    }
  }
}

cplx resolvent_difference_kernel(int d, double lambda, double r) {
  SpectralPoint probe{d, Branch::plus, lambda, std::max(r, 1.0)};
  validate_spectral_point(probe);  // r = 0 is fine here: the difference is regular
  if (r < 0.0) throw std::domain_error("kernel: separation must be nonnegative");
  // (i/2) (lambda/(2 pi r))^{d/2-1} J_{d/2-1}(lambda r), written through the
  // entire function J_nu(z)/z^nu so r = 0 needs no special case.
  const double jt = bessel_j_over_znu(d - 2, lambda * r);
  const double amp = std::pow(lambda * lambda / (2.0 * kPi), 0.5 * d - 1.0);
  return cplx(0.0, 0.5) * amp * jt;
}

namespace {

double remainder_shape(int d, double lambda, double r) {
  switch (d) {
    case 1:
      return std::sqrt(lambda) * std::pow(r, 1.5);
    case 2:
      return std::pow(lambda, 1.5) * std::pow(r, 1.5);
    default:
      return std::pow(lambda, d - 1) * r;
  }
}

// One-point calibration of the remainder constant; the expansion-control
// property test sweeps (lambda, r) and checks the majorant holds.
double remainder_constant(int d) {
  static double cache[4] = {-1.0, -1.0, -1.0, -1.0};
  const int slot = d <= 3 ? d : 3;
  if (cache[slot] < 0.0) {
    const double lam0 = d == 3 ? 0.2 : 0.5;
    const double r0 = d == 3 ? 0.5 : (d == 2 ? 4.0 : 3.0);
    SpectralPoint ref{d, Branch::plus, lam0, r0};
    cplx full = free_resolvent_kernel(ref);
    cplx trunc;
    switch (d) {
      case 1:
        trunc = cplx(0.0, 0.5 / lam0) - 0.5 * r0;
        break;
      case 2:
        trunc = cplx(-kEulerGamma / (2.0 * kPi), 0.25) -
                std::log(lam0 * r0 / 2.0) / (2.0 * kPi);
        break;
      default:
        trunc = (1.0 / r0 + cplx(0.0, lam0)) / (4.0 * kPi);
    }
    cache[slot] = 1.25 * std::abs(full - trunc) / remainder_shape(d, lam0, r0);
  }
  return cache[slot];
}

}  // namespace

LowEnergyValue low_energy_expansion(const SpectralPoint& p) {
  validate_spectral_point(p);
  if (!(p.lambda < 1.0))
    throw std::domain_error("low_energy_expansion: requires 0 < lambda < 1");
  if (p.d > 3)
    throw std::domain_error("low_energy_expansion: implemented for d <= 3");
  const int s = branch_sign(p.branch);
  LowEnergyValue out;
  switch (p.d) {
    case 1:
      out.value = cplx(0.0, s * 0.5 / p.lambda) - 0.5 * p.r;
      break;
    case 2:
      out.value = cplx(-kEulerGamma / (2.0 * kPi), s * 0.25) -
                  std::log(p.lambda * p.r / 2.0) / (2.0 * kPi);
      break;
    default:
      out.value = (1.0 / p.r + cplx(0.0, s * p.lambda)) / (4.0 * kPi);
  }
  out.remainder_bound = remainder_constant(p.d) * remainder_shape(p.d, p.lambda, p.r);
  return out;
}

cplx free_propagator_kernel(int d, double t, double r) {
  if (!(t > 0.0)) throw std::domain_error("free_propagator_kernel: t must be positive");
  if (d < 1) throw std::domain_error("free_propagator_kernel: bad dimension");
  const double amp = std::pow(4.0 * kPi * t, -0.5 * d);
  return amp * expi(0.25 * kPi * d + r * r / (4.0 * t));
}

SplitWeights d2_kernel_split(double lambda, double r) {
  SpectralPoint p{2, Branch::plus, lambda, r};
  validate_spectral_point(p);
  SplitWeights sw;
  sw.z = lambda * r;
  const double om = unit_plateau(sw.z);
  const cplx h0 = hankel_h0(Branch::plus, sw.z);
  const cplx quarter_i(0.0, 0.25);
  const cplx far = om == 1.0 ? cplx(0.0) : quarter_i * h0 * (1.0 - om) * expi(-sw.z);
  sw.w_less = quarter_i * h0 * om;
  sw.w_greater = far;
  sw.j_less = quarter_i * bessel_j0(sw.z) * om * expi(-sw.z);
  sw.j_greater = far;
  return sw;
}

}  // namespace akprop
