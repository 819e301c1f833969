#include <doctest.h>

#include <cmath>
#include <complex>

#include "akprop/special.hpp"
#include "reference_values.hpp"

using namespace akprop;

namespace {

// Test-side ascending series, valid to ~1e-14 for z <= 6 (independent of the
// library path, which switches methods at z = 16).
long double j0_series_ld(long double z) {
  long double q = z * z / 4.0L, term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 60; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-22L) break;
  }
  return sum;
}

// Test-side Hankel asymptotic sum for large z (z >= 30).
std::complex<double> h0_asym_ref(double z) {
  std::complex<double> sum = 1.0, term = 1.0;
  for (int k = 1; k < 30; ++k) {
    double tk = 2.0 * k - 1.0;
    term *= std::complex<double>(0.0, 1.0) * (-(tk * tk) / (8.0 * k * z));
    if (std::abs(term) > 1.0) break;
    sum += term;
  }
  return std::sqrt(2.0 / (M_PI * z)) * expi(z - M_PI / 4.0) * sum;
}

}  // namespace

TEST_CASE("bessel J0/Y0 against frozen high-precision table") {
  for (int i = 0; i < refval::n_bessel; ++i) {
    double z = refval::bessel_z[i];
    double scale = std::hypot(refval::bessel_j0[i], refval::bessel_y0[i]);
    CHECK(std::abs(bessel_j0(z) - refval::bessel_j0[i]) <= 1e-12 * scale);
    CHECK(std::abs(bessel_y0(z) - refval::bessel_y0[i]) <= 1e-12 * scale);
  }
}

TEST_CASE("bessel J0 matches independent series at small z") {
  for (double z : {1e-8, 0.3, 1.0, 2.5, 4.0, 6.0}) {
    double ref = static_cast<double>(j0_series_ld(z));
    CHECK(bessel_j0(z) == doctest::Approx(ref).epsilon(1e-13));
  }
  CHECK(bessel_j0(0.0) == 1.0);
}

TEST_CASE("hankel H0 matches independent asymptotics at large z") {
  for (double z : {30.0, 55.0, 120.0, 640.0}) {
    auto h = hankel_h0(Branch::plus, z);
    auto ref = h0_asym_ref(z);
    CHECK(std::abs(h - ref) <= 1e-12 * std::abs(ref));
  }
}

TEST_CASE("hankel H0 branches and documented crossover") {
  auto h = hankel_h0(Branch::plus, 1.0);
  CHECK(std::abs(h - refval::h0_plus_at_1) <= 1e-13);
  CHECK(std::abs(hankel_h0(Branch::minus, 1.0) - std::conj(h)) == 0.0);
  // continuity across the series/asymptotic switch at z = 16
  double below = std::abs(hankel_h0(Branch::plus, 15.9) -
                          cplx(refval::bessel_j0[7], refval::bessel_y0[7]));
  double above = std::abs(hankel_h0(Branch::plus, 16.1) -
                          cplx(refval::bessel_j0[8], refval::bessel_y0[8]));
  CHECK(below <= 1e-13);
  CHECK(above <= 1e-13);
}

TEST_CASE("half-integer Bessel") {
  for (double z : {0.05, 0.7, 2.0, 9.0}) {
    double ref = std::sqrt(2.0 / (M_PI * z)) * std::sin(z);
    CHECK(bessel_j_half(0, z) == doctest::Approx(ref).epsilon(1e-13));
  }
  CHECK(bessel_j_half(0, 2.0) == doctest::Approx(refval::j_half_at_2).epsilon(1e-13));
  CHECK(bessel_j_half(1, 2.0) == doctest::Approx(refval::j_3half_at_2).epsilon(1e-13));
  CHECK(bessel_j_half(2, 7.0) == doctest::Approx(refval::j_5half_at_7).epsilon(1e-13));
  CHECK(bessel_j_half(1, 1e-3) == doctest::Approx(refval::j_3half_small).epsilon(1e-12));
}

TEST_CASE("J_nu(z)/z^nu is finite at zero and matches J elsewhere") {
  CHECK(bessel_j_over_znu(0, 0.0) == doctest::Approx(1.0));
  // nu = 1/2: Jt(0) = 1/(2^{1/2} Gamma(3/2)) = sqrt(2/pi)
  CHECK(bessel_j_over_znu(1, 0.0) == doctest::Approx(std::sqrt(2.0 / M_PI)));
  for (double z : {0.3, 1.0, 4.0}) {
    CHECK(bessel_j_over_znu(1, z) ==
          doctest::Approx(bessel_j_half(0, z) / std::sqrt(z)).epsilon(1e-12));
    CHECK(bessel_j_over_znu(0, z) == doctest::Approx(bessel_j0(z)).epsilon(1e-12));
    CHECK(bessel_j_over_znu(-1, z) ==
          doctest::Approx(std::sqrt(2.0 / M_PI) * std::cos(z)).epsilon(1e-12));
  }
}

TEST_CASE("Fresnel integrals against frozen table") {
  for (int i = 0; i < refval::n_fresnel; ++i) {
    CHECK(fresnel_c(refval::fresnel_x[i]) ==
          doctest::Approx(refval::fresnel_c[i]).epsilon(1e-13));
    CHECK(fresnel_s(refval::fresnel_x[i]) ==
          doctest::Approx(refval::fresnel_s[i]).epsilon(1e-13));
  }
  CHECK(fresnel_c(-1.0) == -fresnel_c(1.0));
  CHECK(fresnel_s(0.0) == 0.0);
}

TEST_CASE("closed-form quadratic phase integral") {
  auto v = fresnel_phase_integral(-7.0, 3.0, 0.0, 4.0);
  CHECK(std::abs(v - refval::osc_unit_t7_r3_L4) <= 1e-12);
  auto f = fresnel_phase_integral(400.0, 0.0, 0.0, 10.0);
  CHECK(std::abs(f - refval::osc_fresnel_t400) <= 1e-12);
  // pure linear phase
  auto lin = fresnel_phase_integral(0.0, 2.0, 0.0, 1.0);
  cplx ref = (expi(2.0) - 1.0) / cplx(0.0, 2.0);
  CHECK(std::abs(lin - ref) <= 1e-14);
}
