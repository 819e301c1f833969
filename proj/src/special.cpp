#include "akprop/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace akprop {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEulerGamma = 0.57721566490153286061;

// Double-double arithmetic for the alternating ascending series.  The series
// terms reach ~e^z before cancelling down to O(1); plain double accumulation
// caps the usable range near z ~ 8, double-double extends it past the
// asymptotic crossover at z = 16.
struct dd {
  double hi = 0.0, lo = 0.0;
};

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd mul(dd a, double b) {
  dd p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline dd div(dd a, double b) {
  double q1 = a.hi / b;
  dd p = two_prod(q1, b);
  double q2 = ((a.hi - p.hi) - p.lo + a.lo) / b;
  return quick_two_sum(q1, q2);
}

inline dd from(double x) { return {x, 0.0}; }

constexpr double kSeriesAsymptoticCrossover = 16.0;

// J0 and the log-free part of Y0 by ascending series, double-double.
void j0_y0_series(double z, double* j0_out, double* y0_out) {
  dd q = div(two_prod(z, z), 4.0);  // z^2/4, exact to dd
  dd term = from(1.0);              // (-1)^k q^k / (k!)^2
  dd sum_j = term;
  dd sum_y = from(0.0);  // sum (-1)^{k+1} H_k q^k/(k!)^2
  dd harmonic = from(0.0);
  for (int k = 1; k < 200; ++k) {
    term = div(mul(term, q), static_cast<double>(k) * k);
    term.hi = -term.hi;
    term.lo = -term.lo;
    harmonic = add(harmonic, div(from(1.0), k));
    sum_j = add(sum_j, term);
    dd y_term = mul(term, harmonic);
    sum_y = add(sum_y, dd{-y_term.hi, -y_term.lo});
    if (std::abs(term.hi) < 1e-20 * (std::abs(sum_j.hi) + 1.0)) break;
  }
  *j0_out = sum_j.hi + sum_j.lo;
  if (y0_out) {
    double logpart = (std::log(z / 2.0) + kEulerGamma) * (*j0_out);
    *y0_out = (2.0 / kPi) * (logpart + (sum_y.hi + sum_y.lo));
  }
}

// H_0^{(1)}(z) ~ sqrt(2/(pi z)) e^{i(z - pi/4)} sum_k i^k a_k / z^k,
// a_k = (-1)^k ((2k-1)!!)^2 / (k! 8^k); truncated at the smallest term.
cplx h0_asymptotic(double z) {
  cplx sum = 1.0;
  cplx term = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 60; ++k) {
    double tk = 2.0 * k - 1.0;
    term *= cplx(0.0, 1.0) * (-(tk * tk) / (8.0 * k * z));
    double mag = std::abs(term);
    if (mag >= prev) break;  // asymptotic floor reached
    sum += term;
    prev = mag;
    if (mag < 1e-18) break;
  }
  return std::sqrt(2.0 / (kPi * z)) * expi(z - kPi / 4.0) * sum;
}

double half_integer_gamma(int twice_a) {
  // Gamma(twice_a / 2) for twice_a >= 1
  return std::tgamma(0.5 * twice_a);
}

}  // namespace

double bessel_j0(double z) {
  z = std::abs(z);
  if (z < kSeriesAsymptoticCrossover) {
    double j0;
    j0_y0_series(z, &j0, nullptr);
    return j0;
  }
  return h0_asymptotic(z).real();
}

double bessel_y0(double z) {
  if (!(z > 0.0)) {
    if (z == 0.0) return -std::numeric_limits<double>::infinity();
    throw std::domain_error("bessel_y0: argument must be >= 0");
  }
  if (z < kSeriesAsymptoticCrossover) {
    double j0, y0;
    j0_y0_series(z, &j0, &y0);
    return y0;
  }
  return h0_asymptotic(z).imag();
}

cplx hankel_h0(Branch branch, double z) {
  if (z >= kSeriesAsymptoticCrossover) {
    cplx h = h0_asymptotic(z);
    return branch == Branch::plus ? h : std::conj(h);
  }
  double j0, y0;
  j0_y0_series(z, &j0, &y0);
  return {j0, branch_sign(branch) * y0};
}

double bessel_j_half(int n, double z) {
  if (n < -1) throw std::domain_error("bessel_j_half: order below -1/2");
  if (z < 0.0) throw std::domain_error("bessel_j_half: negative argument");
  if (z == 0.0) return n == -1 ? std::numeric_limits<double>::infinity() : 0.0;
  double nu = n + 0.5;
  if (z >= std::max(1.0, static_cast<double>(n))) {
    // upward recurrence from the trig closed forms
    double pref = std::sqrt(2.0 / (kPi * z));
    double jm = pref * std::cos(z);  // J_{-1/2}
    double jc = pref * std::sin(z);  // J_{+1/2}
    if (n == -1) return jm;
    double order = 0.5;
    for (int k = 0; k < n; ++k) {
      double jn = (2.0 * order / z) * jc - jm;
      jm = jc;
      jc = jn;
      order += 1.0;
    }
    return jc;
  }
  // ascending series (small z, no cancellation)
  double q = z * z / 4.0;
  double term = std::pow(z / 2.0, nu) / half_integer_gamma(2 * n + 3);
  double sum = term;
  for (int k = 1; k < 60; ++k) {
    term *= -q / (k * (nu + k));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double bessel_j_over_znu(int twice_nu, double z) {
  if (twice_nu < -1) throw std::domain_error("bessel_j_over_znu: order below -1/2");
  z = std::abs(z);
  double nu = 0.5 * twice_nu;
  if (z < 0.5) {
    // 2^{-nu} sum (-1)^k (z^2/4)^k / (k! Gamma(nu+k+1))
    double q = z * z / 4.0;
    double term = std::pow(2.0, -nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 40; ++k) {
      term *= -q / (k * (nu + k));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  double j;
  if (twice_nu % 2 == 0) {
    int m = twice_nu / 2;
    if (m == 0) {
      j = bessel_j0(z);
    } else {
      // integer orders above 0 arise only for even d >= 4, which the kernel
      // module does not serve; fail loudly rather than silently recurse.
      throw std::domain_error("bessel_j_over_znu: integer order > 0 unsupported");
    }
  } else {
    j = bessel_j_half((twice_nu - 1) / 2, z);
  }
  return j * std::pow(z, -nu);
}

namespace {

// C(x) + iS(x) by double-double ascending series, x < 4
cplx fresnel_series(double x) {
  dd x2 = two_prod(x, x);
  dd w = mul(mul(x2, x2), kPi * kPi / 4.0);  // (pi x^2/2)^2
  // C: x * sum u_n/(4n+1), u_n = (-1)^n (pi/2)^{2n} x^{4n} / (2n)!
  dd u = from(1.0);
  dd sum_c = from(1.0);
  for (int n = 1; n < 60; ++n) {
    u = div(mul(u, w), (2.0 * n - 1.0) * (2.0 * n));
    u.hi = -u.hi;
    u.lo = -u.lo;
    sum_c = add(sum_c, div(u, 4.0 * n + 1.0));
    if (std::abs(u.hi) < 1e-22 * (1.0 + std::abs(sum_c.hi))) break;
  }
  // S: (pi/2) x^3 * sum v_n/(4n+3), v_n = (-1)^n (pi/2)^{2n} x^{4n} / (2n+1)!
  dd v = from(1.0);
  dd sum_s = div(from(1.0), 3.0);
  for (int n = 1; n < 60; ++n) {
    v = div(mul(v, w), (2.0 * n) * (2.0 * n + 1.0));
    v.hi = -v.hi;
    v.lo = -v.lo;
    sum_s = add(sum_s, div(v, 4.0 * n + 3.0));
    if (std::abs(v.hi) < 1e-22 * (1.0 + std::abs(sum_s.hi))) break;
  }
  double c = x * (sum_c.hi + sum_c.lo);
  double s = 0.5 * kPi * x * x * x * (sum_s.hi + sum_s.lo);
  return {c, s};
}

// E(x) = int_x^inf e^{i pi u^2/2} du by repeated integration by parts;
// C + iS = (1+i)/2 - E.
cplx fresnel_asymptotic_tail(double x) {
  cplx ip = cplx(0.0, kPi);
  cplx coeff = 1.0 / x;
  cplx sum = coeff;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 40; ++k) {
    coeff *= (2.0 * k - 1.0) / (ip * x * x);
    double mag = std::abs(coeff);
    if (mag >= prev) break;
    sum += coeff;
    prev = mag;
    if (mag < 1e-19) break;
  }
  return -expi(0.5 * kPi * x * x) / ip * sum;
}

// The integration-by-parts tail bottoms out at ~e^{-pi x^2 / 2}; the series
// (double-double) stays exact past the crossover, so switch at 4.6 where both
// sides are below 1e-15.
cplx fresnel_cs(double x) {
  double ax = std::abs(x);
  cplx v;
  if (ax < 4.6) {
    v = fresnel_series(ax);
  } else {
    v = cplx(0.5, 0.5) - fresnel_asymptotic_tail(ax);
  }
  return x < 0.0 ? -v : v;
}

}  // namespace

double fresnel_c(double x) { return fresnel_cs(x).real(); }
double fresnel_s(double x) { return fresnel_cs(x).imag(); }

cplx fresnel_phase_integral(double a, double b, double lo, double hi) {
  if (a == 0.0) {
    if (b == 0.0) return hi - lo;
    return (expi(b * hi) - expi(b * lo)) / cplx(0.0, b);
  }
  double aa = std::abs(a);
  double shift = b / (2.0 * a);
  double scale = std::sqrt(2.0 * aa / kPi);
  // P(v) = int_0^v e^{i sign(a) |a| w^2} dw
  auto P = [&](double v) {
    cplx cs = fresnel_cs(v * scale);
    if (a < 0.0) cs = std::conj(cs);
    return std::sqrt(kPi / (2.0 * aa)) * cs;
  };
  return expi(-b * b / (4.0 * a)) * (P(hi + shift) - P(lo + shift));
}

}  // namespace akprop
