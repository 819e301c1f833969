#include <doctest.h>

#include <cmath>

#include "akprop/kernels.hpp"
#include "akprop/quadrature.hpp"
#include "reference_values.hpp"

using namespace akprop;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("free resolvent kernel closed forms") {
  CHECK(std::abs(free_resolvent_kernel({1, Branch::plus, 2.0, 0.0}) - cplx(0.0, 0.25)) <=
        1e-15);
  cplx k3 = free_resolvent_kernel({3, Branch::plus, 1.0, 1.0});
  CHECK(std::abs(k3 - expi(1.0) / (4.0 * kPi)) <= 1e-15);
  cplx k2 = free_resolvent_kernel({2, Branch::plus, 1.0, 1.0});
  CHECK(std::abs(k2 - refval::kernel_d2_plus_lam1_r1) <= 1e-13);
  cplx k5 = free_resolvent_kernel({5, Branch::plus, 1.3, 0.9});
  CHECK(std::abs(k5 - refval::kernel_d5_plus) <= 1e-13 * std::abs(k5));
}

TEST_CASE("free resolvent kernel domain errors") {
  CHECK_THROWS_AS(free_resolvent_kernel({2, Branch::plus, 1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(free_resolvent_kernel({3, Branch::plus, 0.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(free_resolvent_kernel({4, Branch::plus, 1.0, 1.0}), std::domain_error);
}

TEST_CASE("conjugate branch symmetry") {
  for (int d : {1, 2, 3, 5}) {
    for (double lam : {0.3, 1.0, 4.7}) {
      for (double r : {0.2, 1.0, 3.5}) {
        cplx plus = free_resolvent_kernel({d, Branch::plus, lam, r});
        cplx minus = free_resolvent_kernel({d, Branch::minus, lam, r});
        CHECK(std::abs(minus - std::conj(plus)) <= 1e-13 * std::abs(plus));
      }
    }
  }
}

TEST_CASE("difference kernel equals plus minus minus") {
  for (int d : {1, 2, 3, 5}) {
    for (double lam : {0.4, 1.0, 3.0}) {
      for (double r : {0.3, 1.2, 4.0}) {
        cplx diff = resolvent_difference_kernel(d, lam, r);
        cplx direct = free_resolvent_kernel({d, Branch::plus, lam, r}) -
                      free_resolvent_kernel({d, Branch::minus, lam, r});
        CHECK(std::abs(diff - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
      }
    }
  }
}

TEST_CASE("difference kernel at r = 0") {
  CHECK(std::abs(resolvent_difference_kernel(1, 1.0, 0.0) - cplx(0.0, 1.0)) <= 1e-14);
  CHECK(std::abs(resolvent_difference_kernel(2, 1.0, 0.0) - cplx(0.0, 0.5)) <= 1e-14);
  // d = 3 limit i sin(lambda r)/(2 pi r) -> i lambda/(2 pi)
  CHECK(std::abs(resolvent_difference_kernel(3, 1.0, 1e-9) - cplx(0.0, 1.0 / (2.0 * kPi))) <=
        1e-12);
}

TEST_CASE("d = 2 difference kernel is (i/2) J0") {
  for (double lam : {0.5, 1.0, 2.0}) {
    for (double r : {0.0, 0.7, 3.0, 11.0}) {
      cplx expect = cplx(0.0, 0.5) * bessel_j0(lam * r);
      CHECK(std::abs(resolvent_difference_kernel(2, lam, r) - expect) <= 1e-10);
    }
  }
}

TEST_CASE("low energy expansion control") {
  // d = 1 example point
  {
    SpectralPoint p{1, Branch::plus, 0.01, 1.0};
    auto le = low_energy_expansion(p);
    cplx full = free_resolvent_kernel(p);
    CHECK(std::abs(full - le.value) <= le.remainder_bound);
  }
  // d = 3 tiny lambda agrees with the full kernel to 1e-4 relative
  {
    SpectralPoint p{3, Branch::plus, 1e-4, 1.0};
    auto le = low_energy_expansion(p);
    cplx full = free_resolvent_kernel(p);
    CHECK(std::abs(le.value - 1.0 / (4.0 * kPi)) <= 1e-4);
    CHECK(std::abs(full - le.value) <= 1e-4 * std::abs(full));
  }
  // d = 2: real part blows up like -log as lambda r -> 0
  {
    auto le1 = low_energy_expansion({2, Branch::plus, 1e-3, 0.1});
    auto le2 = low_energy_expansion({2, Branch::plus, 1e-6, 0.1});
    CHECK(le2.value.real() > le1.value.real());
    CHECK(le1.value.real() > 0.0);
  }
  // majorant sweep: the one-point calibration must dominate everywhere
  for (int d : {1, 2, 3}) {
    for (double lam : {0.02, 0.1, 0.3, 0.7, 0.95}) {
      for (double r : {0.1, 0.5, 1.0, 2.5, 6.0, 20.0}) {
        SpectralPoint p{d, Branch::plus, lam, r};
        auto le = low_energy_expansion(p);
        cplx full = free_resolvent_kernel(p);
        CHECK(std::abs(full - le.value) <= le.remainder_bound * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("free propagator kernel") {
  for (int d : {1, 2, 3}) {
    for (double t : {0.1, 1.0, 16.0}) {
      cplx k = free_propagator_kernel(d, t, 1.7);
      CHECK(std::abs(k) == doctest::Approx(std::pow(4.0 * kPi * t, -0.5 * d)).epsilon(1e-14));
    }
  }
  cplx unit = free_propagator_kernel(1, 1.0 / (4.0 * kPi), 0.0);
  CHECK(std::abs(unit - expi(kPi / 4.0)) <= 1e-14);
  CHECK(std::abs(free_propagator_kernel(3, 1.0, 0.0)) == doctest::Approx(0.022450).epsilon(1e-4));
  CHECK_THROWS_AS(free_propagator_kernel(1, 0.0, 1.0), std::domain_error);
}

TEST_CASE("d = 2 kernel split supports and recomposition") {
  {
    auto sw = d2_kernel_split(0.25, 1.0);  // z = 0.25 < 1/2
    CHECK(sw.w_greater == cplx(0.0));
    cplx kernel = free_resolvent_kernel({2, Branch::plus, 0.25, 1.0});
    CHECK(std::abs(sw.w_less - kernel) <= 1e-14);
  }
  {
    auto sw = d2_kernel_split(2.0, 1.0);  // z = 2 > 1
    CHECK(sw.w_less == cplx(0.0));
    CHECK(sw.j_less == cplx(0.0));
  }
  for (double z : {0.75, 0.6, 0.9}) {
    auto sw = d2_kernel_split(z, 1.0);
    cplx kernel = free_resolvent_kernel({2, Branch::plus, z, 1.0});
    cplx recomposed = expi(sw.z) * sw.w_greater + sw.w_less;
    CHECK(std::abs(recomposed - kernel) <= 1e-12 * std::abs(kernel));
    // difference recomposition: sum over branches with J_{-,.} = -conj(J_{+,.})
    cplx diff = 2.0 * cplx(0.0, 1.0) *
                std::imag(expi(sw.z) * (sw.j_greater + sw.j_less));
    CHECK(std::abs(diff - resolvent_difference_kernel(2, z, 1.0)) <= 1e-12);
  }
}

TEST_CASE("split weight decay bounds") {
  for (double z = 0.5; z <= 1000.0; z *= 1.45) {
    auto sw = d2_kernel_split(z, 1.0);
    CHECK(std::abs(sw.w_greater) * std::sqrt(1.0 + z) <= 0.5);
  }
  for (double z = 1e-6; z <= 1.0; z *= 2.7) {
    auto sw = d2_kernel_split(z, 1.0);
    double logz = std::max(std::abs(std::log(z)), 1e-3);
    CHECK(std::abs(sw.w_less) <= 1.0 * logz + 0.3);
  }
}

TEST_CASE("Helmholtz residual vanishes at second order in d = 1") {
  const double lam = 1.3;
  auto kernel = [&](double r) { return free_resolvent_kernel({1, Branch::plus, lam, r}); };
  auto residual = [&](double h) {
    double worst = 0.0;
    for (double r = 0.5; r <= 5.0; r += 0.25) {
      cplx lap = (kernel(r + h) - 2.0 * kernel(r) + kernel(r - h)) / (h * h);
      worst = std::max(worst, std::abs(-lap - lam * lam * kernel(r)));
    }
    return worst;
  };
  double r1 = residual(1e-2);
  double r2 = residual(5e-3);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(r2 < 1e-4);
}

TEST_CASE("principal value quadrature") {
  // g = 1: PV int_0^2 drho/(rho^2-1) = -log(3)/2
  auto flat = [](double) { return cplx(1.0); };
  auto q = pv_integrate(flat, 1.0, 2.0);
  CHECK(q.value.real() == doctest::Approx(-0.5 * std::log(3.0)).epsilon(1e-11));
  CHECK(std::abs(q.value.imag()) <= 1e-13);
  // Gaussian spectral density: matches the frozen Borel real part
  auto gauss = [](double rho) { return cplx(2.0 * std::exp(-rho * rho) / std::sqrt(kPi)); };
  auto qb = pv_integrate(gauss, 1.0, 40.0);
  CHECK(qb.value.real() == doctest::Approx(refval::borel_d1_gauss_lam1.real()).epsilon(1e-10));
}
