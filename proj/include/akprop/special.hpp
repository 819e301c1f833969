#pragma once

#include <complex>

namespace akprop {

using cplx = std::complex<double>;

inline cplx expi(double theta) { return {std::cos(theta), std::sin(theta)}; }

enum class Branch { plus, minus };

inline int branch_sign(Branch b) { return b == Branch::plus ? +1 : -1; }

/// Bessel functions of the first and second kind, order zero.
/// Ascending series below z = 16 (compensated double-double accumulation),
/// Hankel asymptotic expansion above; relative accuracy ~1e-13 throughout.
double bessel_j0(double z);
double bessel_y0(double z);  // requires z > 0

/// H_0^{(1)}(z) = J_0 + iY_0 for branch plus, H_0^{(2)} = J_0 - iY_0 for minus.
cplx hankel_h0(Branch branch, double z);

/// J_{n+1/2}(z) for half-integer orders, n >= -1 (closed trig forms with a
/// series fallback at small argument).
double bessel_j_half(int n, double z);

/// J_nu(z) / z^nu with nu = twice_nu/2, entire in z (finite at z = 0).
/// Supports twice_nu >= -1: covers nu = d/2 - 1 for all dimensions d >= 1.
double bessel_j_over_znu(int twice_nu, double z);

/// Fresnel integrals C(x) = int_0^x cos(pi u^2/2) du, S likewise (odd in x).
double fresnel_c(double x);
double fresnel_s(double x);

/// Closed form of int_lo^hi exp(i(a u^2 + b u)) du through Fresnel integrals.
cplx fresnel_phase_integral(double a, double b, double lo, double hi);

}  // namespace akprop
