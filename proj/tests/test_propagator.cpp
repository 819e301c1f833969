#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "akprop/propagator.hpp"
#include "reference_values.hpp"

using namespace akprop;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

Eigen::VectorXd vec3(double x, double y, double z) {
  Eigen::VectorXd v(3);
  v << x, y, z;
  return v;
}

QuadratureConfig fast_cfg() {
  QuadratureConfig cfg;
  cfg.lambda_max = 24.0;
  return cfg;
}

}  // namespace

TEST_CASE("scaled convolved profile references") {
  auto g1 = make_gaussian_profile(1, 1.0);
  cplx v = scaled_convolved_profile(g1, Branch::plus, 2.0, vec1(0.5));
  CHECK(std::abs(v - refval::lamh_d1_gauss_lam2_x05) <= 1e-11);
  // d = 1 modulus bound |h| <= ||phi||_1 / (2 lambda)
  double phi_l1 = std::abs(g1.mean);
  for (double lam : {0.5, 2.0, 11.0}) {
    cplx h = convolved_profile(g1, Branch::plus, lam, vec1(0.3));
    CHECK(std::abs(h) <= phi_l1 / (2.0 * lam) * 1.0001);
  }
  // d = 3: independent Fourier-route reference value
  auto g3 = make_gaussian_profile(3, 1.0);
  cplx v3 = scaled_convolved_profile(g3, Branch::plus, 2.0, vec3(0.7, 0.0, 0.0));
  CHECK(std::abs(v3 - refval::h_d3_gauss_lam2_r07) <= 1e-8);
  // minus branch conjugates for a real profile
  cplx v3m = scaled_convolved_profile(g3, Branch::minus, 2.0, vec3(0.7, 0.0, 0.0));
  CHECK(std::abs(v3m - std::conj(v3)) <= 1e-12);
}

TEST_CASE("fourier convolution route agrees with position-space quadrature") {
  auto g1 = make_gaussian_profile(1, 1.0);
  for (double lam : {0.3, 2.0, 9.0}) {
    cplx pos = scaled_convolved_profile(g1, Branch::plus, lam, vec1(0.5));
    cplx fou = scaled_convolved_profile_fourier(g1, Branch::plus, lam, vec1(0.5));
    CHECK(std::abs(pos - fou) <= 1e-9);
  }
  auto g3 = make_gaussian_profile(3, 1.0);
  auto shifted = translate(g3, vec3(1.0, 0.0, 0.0));
  for (double lam : {0.7, 4.0}) {
    cplx pos = scaled_convolved_profile(shifted, Branch::minus, lam, vec3(0.4, 0.2, 0.0));
    cplx fou =
        scaled_convolved_profile_fourier(shifted, Branch::minus, lam, vec3(0.4, 0.2, 0.0));
    CHECK(std::abs(pos - fou) <= 1e-8);
  }
}

TEST_CASE("band-limited convolution: fourier route against the position table") {
  auto bl = make_band_limited_profile(1, 1.0);
  const auto& tab = *bl.table;
  const double x = 0.5;
  for (double lam : {0.8, 2.5}) {
    cplx fourier_route = scaled_convolved_profile(bl, Branch::plus, lam, vec1(x));
    // composite Simpson straight over the full position table
    const long n = static_cast<long>(tab.values.size());
    cplx acc = 0.0;
    for (long i = -(n - 1); i < n; ++i) {
      double w = (std::abs(i) == n - 1) ? 1.0 : (i % 2 == 0 ? 2.0 : 4.0);
      acc += w * expi(lam * std::abs(x - i * tab.h)) * tab.values[std::labs(i)];
    }
    cplx direct = cplx(0.0, 0.5) * acc * (tab.h / 3.0);
    CHECK(std::abs(fourier_route - direct) <= 1e-6);
  }
}

TEST_CASE("zero-mean profile keeps h bounded at low energy") {
  auto zm = make_zero_mean_profile(1, 1.0);
  double prev = 0.0;
  for (double lam : {1e-1, 1e-2, 1e-3, 1e-4}) {
    cplx h = convolved_profile(zm, Branch::plus, lam, vec1(0.4));
    CHECK(std::abs(h) < 2.0);
    prev = std::abs(h);
  }
  CHECK(prev > 0.0);
}

TEST_CASE("d = 3 radial reduction against doubled-resolution reference") {
  auto g3 = make_gaussian_profile(3, 1.0);
  QuadOptions loose{1e-9, 1e-8, 2000};
  QuadOptions tight{1e-13, 1e-12, 8000};
  for (double lam : {0.7, 3.0}) {
    cplx a = scaled_convolved_profile(g3, Branch::plus, lam, vec3(0.4, -0.3, 0.8), loose);
    cplx b = scaled_convolved_profile(g3, Branch::plus, lam, vec3(0.4, -0.3, 0.8), tight);
    CHECK(std::abs(a - b) <= 1e-8);
  }
  // shell fallback agrees with the radial reduction
  auto shifted = translate(g3, vec3(0.3, 0.1, -0.2));
  Profile forced = shifted;
  Eigen::VectorXd tiny_k = Eigen::VectorXd::Zero(3);
  cplx radial = scaled_convolved_profile(shifted, Branch::plus, 1.0, vec3(0.5, 0, 0));
  Profile generic = shifted;
  generic.modk = Eigen::VectorXd::Constant(3, 1e-300);  // defeats the radial fast path
  cplx shell = scaled_convolved_profile(generic, Branch::plus, 1.0, vec3(0.5, 0, 0));
  CHECK(std::abs(radial - shell) <= 1e-6);
}

TEST_CASE("d = 2 radial reduction is consistent under branch conjugation") {
  auto g2 = make_gaussian_profile(2, 1.0);
  Eigen::VectorXd x(2);
  x << 0.7, -0.2;
  cplx p = scaled_convolved_profile(g2, Branch::plus, 1.3, x);
  cplx m = scaled_convolved_profile(g2, Branch::minus, 1.3, x);
  CHECK(std::abs(m - std::conj(p)) <= 1e-12);
  CHECK(std::abs(p) > 1e-6);
  // lambda -> 0 limit vanishes (scaled by lambda against the log growth)
  cplx low = scaled_convolved_profile(g2, Branch::plus, 1e-6, x);
  CHECK(std::abs(low) < 1e-3);
}

TEST_CASE("oscillatory lambda quadrature closed forms") {
  QuadratureConfig cfg = fast_cfg();
  auto one = [](double) { return cplx(1.0); };
  auto r = oscillatory_lambda_quadrature(one, 7.0, 3.0, 0.0, 4.0, cfg);
  CHECK(std::abs(r.value - refval::osc_unit_t7_r3_L4) <= 1e-9);
  auto gauss = [](double lam) { return cplx(std::exp(-lam * lam)); };
  auto r2 = oscillatory_lambda_quadrature(
      gauss, 5.0, 0.0, 0.0, std::numeric_limits<double>::infinity(), cfg);
  CHECK(std::abs(r2.value - refval::osc_gauss_t5) <= 1e-9);
}

TEST_CASE("empty perturbation gives an exactly zero difference kernel") {
  auto g1 = make_gaussian_profile(1, 1.0);
  KernelSample s = rank_one_difference_kernel(g1, 0.0, 1.0, vec1(0.5), vec1(-0.5));
  CHECK(s.diff_value == cplx(0.0));
  CHECK(std::abs(s.free_value) ==
        doctest::Approx(std::pow(4.0 * M_PI, -0.5)).epsilon(1e-12));
}

TEST_CASE("kernel symmetry and time reversal for a real profile") {
  auto g1 = make_gaussian_profile(1, 1.0);
  ProfileFamily fam;
  fam.members = {g1};
  fam.weights = Eigen::VectorXd::Ones(1);
  KernelEvaluator eval(fam, fast_cfg());
  auto s_xy = eval(1.0, vec1(0.5), vec1(-0.25));
  auto s_yx = eval(1.0, vec1(-0.25), vec1(0.5));
  CHECK(std::abs(s_xy.diff_value - s_yx.diff_value) <= 1e-7);
  auto s_neg = eval(-1.0, vec1(0.5), vec1(-0.25));
  CHECK(std::abs(s_neg.diff_value - std::conj(s_xy.diff_value)) <= 1e-7);
}

TEST_CASE("small-alpha linearity") {
  auto g1 = make_gaussian_profile(1, 1.0);
  std::vector<double> alphas = {1e-3, 2e-3, 4e-3};
  std::vector<cplx> ratios;
  for (double a : alphas) {
    auto s = rank_one_difference_kernel(g1, a, 1.0, vec1(0.5), vec1(-0.5), fast_cfg());
    ratios.push_back(s.diff_value / a);
  }
  for (size_t i = 1; i < ratios.size(); ++i)
    CHECK(std::abs(ratios[i] - ratios[0]) <= 0.02 * std::abs(ratios[0]));
}

TEST_CASE("finite-rank kernel with one member equals the rank-one kernel") {
  auto g1 = make_gaussian_profile(1, 1.0);
  ProfileFamily fam;
  fam.members = {g1};
  fam.weights = Eigen::VectorXd::Constant(1, 0.8);
  auto a = finite_rank_difference_kernel(fam, 1.0, vec1(0.25), vec1(0.5), fast_cfg());
  auto b = rank_one_difference_kernel(g1, 0.8, 1.0, vec1(0.25), vec1(0.5), fast_cfg());
  CHECK(std::abs(a.diff_value - b.diff_value) <= 1e-10);
}

TEST_CASE("fourier-disjoint additivity of the finite-rank kernel") {
  auto fam = make_fourier_disjoint_family(1, 2, 8.0, false);
  QuadratureConfig cfg = fast_cfg();
  cfg.lambda_max = 18.0;
  auto joint = finite_rank_difference_kernel(fam, 1.0, vec1(0.5), vec1(0.0), cfg);
  cplx sum = 0.0;
  for (int j = 0; j < 2; ++j) {
    ProfileFamily single;
    single.members = {fam.members[j]};
    single.weights = Eigen::VectorXd::Constant(1, fam.weights[j]);
    sum += finite_rank_difference_kernel(single, 1.0, vec1(0.5), vec1(0.0), cfg)
               .diff_value;
  }
  CHECK(std::abs(joint.diff_value - sum) <= 1e-6);
}

TEST_CASE("quadrature self-consistency under config tightening") {
  auto g1 = make_gaussian_profile(1, 1.0);
  QuadratureConfig base = fast_cfg();
  QuadratureConfig tight = base;
  tight.lambda_max = 2.0 * base.lambda_max;
  tight.phase_budget = 0.5 * base.phase_budget;
  auto a = rank_one_difference_kernel(g1, 1.0, 1.0, vec1(0.5), vec1(-0.5), base);
  auto b = rank_one_difference_kernel(g1, 1.0, 1.0, vec1(0.5), vec1(-0.5), tight);
  CHECK(std::abs(a.diff_value - b.diff_value) <=
        std::max(a.err_est, 1e-7));
}

TEST_CASE("trace-class partial sums") {
  auto fam = make_fourier_disjoint_family(1, 3, 8.0, true);
  QuadratureConfig cfg = fast_cfg();
  cfg.lambda_max = 20.0;
  auto sums = trace_class_partial_sums(fam, 1.0, vec1(0.3), vec1(-0.2), 3, cfg);
  REQUIRE(sums.size() == 3);
  double d12 = std::abs(sums[1].sample.diff_value - sums[0].sample.diff_value);
  double d23 = std::abs(sums[2].sample.diff_value - sums[1].sample.diff_value);
  CHECK(d23 < d12);
  CHECK(sums[1].tail_bound < sums[0].tail_bound);
  CHECK(sums[0].tail_bound > 0.0);
  auto single = trace_class_difference_kernel(fam, 1.0, vec1(0.3), vec1(-0.2), 3, cfg);
  CHECK(std::abs(single.sample.diff_value - sums[2].sample.diff_value) == 0.0);
}

TEST_CASE("quadrature config validation") {
  QuadratureConfig cfg;
  cfg.lambda0 = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg = {};
  cfg.phase_budget = 2.0;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg = {};
  cfg.epsilon_schedule = {0.1, 0.2, 0.05};
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}
