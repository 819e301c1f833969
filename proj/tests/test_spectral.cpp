#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "akprop/spectral.hpp"
#include "reference_values.hpp"

using namespace akprop;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

}  // namespace

TEST_CASE("borel transform matches frozen references") {
  auto g1 = make_gaussian_profile(1, 1.0);
  auto v = borel_transform(g1, g1, 1.0, Branch::plus).value;
  CHECK(std::abs(v - refval::borel_d1_gauss_lam1) <= 1e-9);
  auto v01 = borel_transform(g1, g1, 0.1, Branch::plus).value;
  CHECK(std::abs(v01 - refval::borel_d1_gauss_lam01) <= 1e-8 * std::abs(v01));

  auto g3 = make_gaussian_profile(3, 1.0);
  auto v3 = borel_transform(g3, g3, 1.0, Branch::plus).value;
  CHECK(std::abs(v3 - refval::borel_d3_gauss_lam1) <= 1e-9);

  Eigen::VectorXd e1 = vec1(4.0);
  auto shifted = translate(g3, Eigen::VectorXd::Zero(3));
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(3);
  tau[0] = 4.0;
  auto cross = borel_transform(g3, translate(g3, tau), 1.0, Branch::plus).value;
  CHECK(std::abs(cross - refval::borel_d3_gauss_cross_tau4_lam1) <= 1e-9);
}

TEST_CASE("borel transform low-energy limits") {
  auto zm = make_zero_mean_profile(1, 1.0);
  auto v = borel_transform(zm, zm, 1e-3, Branch::plus).value;
  CHECK(v.real() == doctest::Approx(2.0).epsilon(0.01));  // int |phihat|^2/xi^2

  auto g1 = make_gaussian_profile(1, 1.0);
  auto lo = borel_transform(g1, g1, 1e-2, Branch::plus).value;
  double lead = std::norm(g1.mean) / (2.0 * 1e-2);
  CHECK(lo.imag() == doctest::Approx(lead).epsilon(0.05));
}

TEST_CASE("radial vs position-space double-quadrature routes agree") {
  auto g1 = make_gaussian_profile(1, 1.0);
  for (double lam : {0.5, 1.5}) {
    auto a = borel_transform(g1, g1, lam, Branch::plus).value;
    auto b = borel_transform_position_space(g1, g1, lam, Branch::plus).value;
    CHECK(std::abs(a - b) <= 1e-6);
  }
  // translated pair, both branches
  auto shifted = translate(g1, vec1(2.0));
  auto a = borel_transform(g1, shifted, 1.0, Branch::minus).value;
  auto b = borel_transform_position_space(g1, shifted, 1.0, Branch::minus).value;
  CHECK(std::abs(a - b) <= 1e-6);
  // zero-mean profile through the generic sphere path
  auto zm = make_zero_mean_profile(1, 1.0);
  auto az = borel_transform(zm, zm, 0.8, Branch::plus).value;
  auto bz = borel_transform_position_space(zm, zm, 0.8, Branch::plus).value;
  CHECK(std::abs(az - bz) <= 1e-6);
  // d = 3 radial
  auto g3 = make_gaussian_profile(3, 1.0);
  auto a3 = borel_transform(g3, g3, 2.0, Branch::plus).value;
  auto b3 = borel_transform_position_space(g3, g3, 2.0, Branch::plus).value;
  CHECK(std::abs(a3 - b3) <= 1e-6);
}

TEST_CASE("high-energy decay: lambda |F| stays bounded") {
  auto g3 = make_gaussian_profile(3, 1.0);
  double cal = 0.0;
  for (double lam : {1.0, 2.0, 5.0, 10.0}) {
    cal = std::max(cal,
                   lam * std::abs(borel_transform(g3, g3, lam, Branch::plus).value));
  }
  for (double lam : {30.0, 100.0}) {
    double v = lam * std::abs(borel_transform(g3, g3, lam, Branch::plus).value);
    CHECK(v <= 1.5 * cal);
  }
}

TEST_CASE("branch relations and delta-term positivity") {
  auto g1 = make_gaussian_profile(1, 1.0);
  ProfileFamily fam = make_translated_family(g1, 2, 3.0);
  for (double lam : {0.3, 1.0, 4.0}) {
    auto plus = borel_matrix(fam, lam, Branch::plus);
    auto minus = borel_matrix(fam, lam, Branch::minus);
    CHECK((minus.F - plus.F.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
    for (int i = 0; i < 2; ++i) CHECK(plus.F(i, i).imag() >= -1e-10);
  }
  // complex (modulated) family: adjoint relation must still hold entrywise
  auto fam2 = make_fourier_disjoint_family(1, 2, 8.0, false);
  auto p = scaled_borel_matrix(fam2, 9.0, Branch::plus, {}, false);
  auto m = scaled_borel_matrix(fam2, 9.0, Branch::minus, {}, false);
  CHECK((m - p.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + p.cwiseAbs().maxCoeff()));
}

TEST_CASE("low-energy regime trends of Lemma-2.2 type") {
  auto g1 = make_gaussian_profile(1, 1.0);
  double lo = 1e300, hi = 0.0;
  for (double lam : {1e-4, 1e-3, 1e-2}) {
    double v = lam * std::abs(borel_transform(g1, g1, lam, Branch::plus).value.imag());
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi <= 1.2 * lo);  // pinched between constants
  auto g2 = make_gaussian_profile(2, 1.0);
  for (double lam : {1e-4, 1e-3, 1e-2}) {
    double ratio = borel_transform(g2, g2, lam, Branch::plus).value.real() /
                   std::log(2.0 / lam);
    CHECK(ratio > 0.05);
    CHECK(ratio < 10.0);
  }
  auto g3 = make_gaussian_profile(3, 1.0);
  auto zm = make_zero_mean_profile(1, 1.0);
  for (double lam : {1e-4, 1e-2}) {
    CHECK(borel_transform(g3, g3, lam, Branch::plus).value.real() > 0.1);
    CHECK(borel_transform(zm, zm, lam, Branch::plus).value.real() > 0.1);
  }
}

TEST_CASE("AK system assembly and inverse") {
  auto g1 = make_gaussian_profile(1, 1.0);
  ProfileFamily single;
  single.members = {g1};
  single.weights = Eigen::VectorXd::Ones(1);
  auto sys = borel_matrix(single, 1.0, Branch::plus);
  cplx expect = 1.0 / (1.0 + sys.F(0, 0));
  CHECK(std::abs(sys.G(0, 0) - expect) <= 1e-12);

  ProfileFamily fam = make_translated_family(g1, 3, 4.0);
  auto sys3 = borel_matrix(fam, 0.7, Branch::plus);
  Eigen::MatrixXcd resid = sys3.G * sys3.A - Eigen::MatrixXcd::Identity(3, 3);
  CHECK(resid.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(sys3.margin > 0.0);
}

TEST_CASE("fourier-disjoint family gives a diagonal system") {
  auto fam = make_fourier_disjoint_family(1, 3, 10.0, true);
  auto sys = borel_matrix(fam, 1.0, Branch::plus);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) {
        cplx expect = 1.0 / (1.0 + fam.weights[i] * sys.F(i, i));
        CHECK(std::abs(sys.G(i, i) - expect) <= 1e-12);
      } else {
        CHECK(sys.F(i, j) == cplx(0.0));
      }
    }
  }
}

TEST_CASE("Neumann expansion of the inverse") {
  auto g3 = make_gaussian_profile(3, 1.0);
  // single profile: no off-diagonal part, expansion settles after one term
  ProfileFamily one;
  one.members = {g3};
  one.weights = Eigen::VectorXd::Ones(1);
  auto sys1 = borel_matrix(one, 1.0, Branch::plus);
  auto ne1 = ak_inverse_neumann(sys1);
  CHECK(ne1.terms_used <= 2);
  CHECK(std::abs(ne1.inverse(0, 0) - sys1.G(0, 0)) <= 1e-12);

  ProfileFamily fam = make_translated_family(g3, 3, 6.0);
  auto sys = borel_matrix(fam, 1.0, Branch::plus);
  auto ne = ak_inverse_neumann(sys);
  CHECK(ne.radius_bound < 0.5);
  CHECK((ne.inverse - sys.G).cwiseAbs().maxCoeff() <= 1e-8);

  // coincident-range translates: radius blows past 1 and the expansion refuses
  ProfileFamily tight = make_translated_family(g3, 3, 0.05);
  auto sys_tight = borel_matrix(tight, 0.05, Branch::plus);
  CHECK_THROWS_AS(ak_inverse_neumann(sys_tight), divergence_error);
}

TEST_CASE("spectral condition scan") {
  auto g1 = make_gaussian_profile(1, 1.0);
  ProfileFamily zero_weight;
  zero_weight.members = {g1};
  zero_weight.weights = Eigen::VectorXd::Zero(1);
  std::vector<double> grid = {0.5, 1.0, 2.0};
  auto rep0 = spectral_condition_scan(zero_weight, grid);
  CHECK(rep0.c0_est == doctest::Approx(1.0));

  ProfileFamily fam;
  fam.members = {g1};
  fam.weights = Eigen::VectorXd::Ones(1);
  std::vector<double> coarse, fine;
  for (int i = 1; i <= 12; ++i) coarse.push_back(0.02 + 3.0 * i / 12.0);
  for (int i = 1; i <= 24; ++i) fine.push_back(0.02 + 3.0 * i / 24.0);
  auto rc = spectral_condition_scan(fam, coarse);
  auto rf = spectral_condition_scan(fam, fine);
  CHECK(std::abs(rc.c0_est - rf.c0_est) <= 0.05 * rc.c0_est);
  CHECK(rc.c0_est > 0.0);
}

TEST_CASE("cross-term decay probe") {
  auto g3 = make_gaussian_profile(3, 1.0);
  std::vector<double> taus = {0.0, 4.0};
  auto rep0 = cross_term_decay_probe(g3, taus, 1.0, 3);
  double f11 = std::abs(borel_transform(g3, g3, 1.0, Branch::plus).value);
  CHECK(rep0.f12_abs[0] == doctest::Approx(f11).epsilon(1e-8));

  std::vector<double> ladder = {4.0, 8.0, 16.0, 32.0};
  auto rep = cross_term_decay_probe(g3, ladder, 1.0, 3);
  CHECK(rep.slope <= -0.8);
  for (size_t i = 0; i + 1 < rep.f12_abs.size(); ++i)
    CHECK(rep.f12_abs[i + 1] <= 0.6 * rep.f12_abs[i]);
}

TEST_CASE("resolvent identity on the grid") {
  const int n = 1024;
  const double L = 25.0;
  const double h = 2.0 * L / n;
  auto g1 = make_gaussian_profile(1, 1.0);
  Eigen::VectorXcd rhs(n);
  for (int i = 0; i < n; ++i) {
    double x = -L + i * h;
    rhs[i] = std::exp(-x * x);
  }
  for (int members : {0, 1, 2}) {
    ProfileFamily fam;
    for (int k = 0; k < members; ++k)
      fam.members.push_back(translate(g1, vec1(1.5 * k)));
    fam.weights = Eigen::VectorXd::Ones(members);
    cplx z(1.0, 1.0);
    Eigen::VectorXcd u = resolvent_apply(fam, z, rhs, L);
    // residual (H - z) u - rhs with a 4th-order Laplacian
    Eigen::VectorXcd resid = Eigen::VectorXcd::Zero(n);
    for (int i = 2; i < n - 2; ++i) {
      cplx lap = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] -
                  u[i + 2]) /
                 (12.0 * h * h);
      resid[i] = -lap - z * u[i] - rhs[i];
    }
    for (int k = 0; k < members; ++k) {
      cplx inner = 0.0;
      Eigen::VectorXd pt(1);
      for (int i = 0; i < n; ++i) {
        pt << -L + i * h;
        inner += std::conj(fam.members[k].eval(pt)) * u[i] * h;
      }
      for (int i = 2; i < n - 2; ++i) {
        pt << -L + i * h;
        resid[i] += fam.weights[k] * inner * fam.members[k].eval(pt);
      }
    }
    double rel = resid.norm() / rhs.norm();
    CHECK(rel <= 1e-3);
  }
  // self-adjointness below the spectrum: real output for real data
  ProfileFamily fam;
  fam.members = {g1};
  fam.weights = Eigen::VectorXd::Ones(1);
  Eigen::VectorXcd u = resolvent_apply(fam, cplx(-1.0, 0.0), rhs, L);
  double max_imag = 0.0;
  for (int i = 0; i < n; ++i) max_imag = std::max(max_imag, std::abs(u[i].imag()));
  CHECK(max_imag <= 1e-12);
  CHECK_THROWS_AS(resolvent_apply(fam, cplx(2.0, 0.0), rhs, L), std::domain_error);
}

TEST_CASE("lambda0 selection") {
  auto g1 = make_gaussian_profile(1, 1.0);
  ProfileFamily fam;
  fam.members = {g1};
  fam.weights = Eigen::VectorXd::Ones(1);
  auto sel = select_lambda0(fam);
  CHECK(sel.regime_verified);
  CHECK(sel.lambda0 <= 0.5);
  CHECK(sel.regime == "d1-nonzero-mean");
}
