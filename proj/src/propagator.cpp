#include "akprop/propagator.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace akprop {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLambdaMin = 1e-9;  // first quadrature node; [0, kLambdaMin] is negligible

Profile conjugate_profile(const Profile& p) {
  Profile q = p;
  q.phase = std::conj(q.phase);
  if (q.modk.size() > 0) q.modk = -q.modk;
  return q;
}

// 1-D direct rule: (i s/2) int e^{i s lam |x-y|} phi(y) dy, split at the kink.
cplx scaled_conv_1d(const Profile& phi, int s, double lambda, double x,
                    const QuadOptions& opts) {
  const double R = phi.position_tail_radius(1e-15) + 1.0;
  const double lo = phi.tau[0] - R, hi = phi.tau[0] + R;
  auto f = [&](double y) -> cplx {
    Eigen::VectorXd yv(1);
    yv << y;
    return expi(s * lambda * std::abs(x - y)) * phi.eval(yv);
  };
  std::vector<double> edges{lo, hi};
  if (x > lo && x < hi) edges = {lo, x, hi};
  cplx integral = integrate_segments(f, edges, opts).value;
  return cplx(0.0, 0.5 * s) * integral;
}

// d = 3 radial reduction with the kink at s = r.
cplx scaled_conv_3d_radial(const Profile& phi, int sb, double lambda, double r,
                           const QuadOptions& opts) {
  const double smax = phi.position_tail_radius(1e-15) + 1.0;
  if (r < 1e-8) {
    auto f = [&](double s) -> cplx {
      return s * phi.radial_position(s) * expi(sb * lambda * s);
    };
    return lambda * integrate(f, 0.0, smax, opts).value;
  }
  auto f = [&](double s) -> cplx {
    cplx osc = expi(sb * lambda * (r + s)) - expi(sb * lambda * std::abs(r - s));
    return s * phi.radial_position(s) * osc;
  };
  std::vector<double> edges{0.0, smax};
  if (r < smax) edges = {0.0, r, smax};
  cplx integral = integrate_segments(f, edges, opts).value;
  return integral / (cplx(0.0, 2.0 * sb) * r);
}

// d = 2 radial reduction through the cylindrical addition theorem.
cplx scaled_conv_2d_radial(const Profile& phi, Branch br, double lambda, double r,
                           const QuadOptions& opts) {
  if (lambda == 0.0) return 0.0;  // lambda * (log-growing h) -> 0
  const int sb = branch_sign(br);
  const double smax = phi.position_tail_radius(1e-15) + 1.0;
  auto inner = [&](double s) -> cplx {
    return bessel_j0(lambda * s) * phi.radial_position(s) * s;
  };
  auto outer = [&](double s) -> cplx {
    return hankel_h0(br, lambda * s) * phi.radial_position(s) * s;
  };
  cplx acc = 0.0;
  if (r > 0.0)
    acc += hankel_h0(br, lambda * r) *
           integrate(inner, 0.0, std::min(r, smax), opts).value;
  if (r < smax) acc += bessel_j0(lambda * r) * integrate(outer, r, smax, opts).value;
  return lambda * cplx(0.0, 0.25 * sb) * 2.0 * kPi * acc;
}

}  // namespace

// (lambda h)^pm = lambda PV int g_h/(rho^2 - lambda^2) + (+-) i pi g_h(lambda)/2
// with g_h(rho) = rho^{d-1} Ahat(rho) Jt_{d/2-1}(rho r) (radial base) or the
// two-point d = 1 sum of the full Fourier transform.
cplx scaled_convolved_profile_fourier(const Profile& phi, Branch br, double lambda,
                                      const Eigen::VectorXd& x,
                                      const QuadOptions& opts) {
  const int d = phi.d;
  Integrand g;
  double rho_sup = phi.fourier_tail_radius(1e-16) + phi.modk.norm();
  if (d == 1) {
    g = [&phi, &x](double rho) -> cplx {
      Eigen::VectorXd p(1), m(1);
      p << rho;
      m << -rho;
      return (phi.fourier(p) * expi(x[0] * rho) +
              phi.fourier(m) * expi(-x[0] * rho)) /
             std::sqrt(2.0 * kPi);
    };
  } else {
    const double r = (x - phi.tau).norm();
    g = [&phi, r, d](double rho) -> cplx {
      return phi.phase * phi.radial_fourier(rho) * std::pow(rho, d - 1) *
             bessel_j_over_znu(d - 2, rho * r);
    };
  }
  const cplx delta = cplx(0.0, branch_sign(br) * 0.5 * kPi) * g(lambda);
  if (lambda == 0.0) return delta;
  cplx pv;
  if (lambda < rho_sup + 1.0) {
    QuadOptions pv_opts = opts;
    pv_opts.abs_tol = std::min(1e-7, opts.abs_tol / std::min(1.0, lambda));
    pv = pv_integrate(g, lambda, std::max(rho_sup, 2.0 * lambda + 2.0), pv_opts).value;
  } else {
    auto plain = [&](double rho) { return g(rho) / (rho * rho - lambda * lambda); };
    pv = integrate(plain, 0.0, rho_sup, opts).value;
  }
  return lambda * pv + delta;
}

namespace {

// generic spherical-shell fallback for non-radial profiles in d >= 2
cplx scaled_conv_shell(const Profile& phi, Branch br, double lambda,
                       const Eigen::VectorXd& x, const QuadOptions& opts) {
  const int d = phi.d;
  const double rho_max =
      phi.position_tail_radius(1e-14) + x.norm() + phi.tau.norm() + 1.0;
  auto shell_mean = [&](double rho) -> cplx {
    if (d == 2) {
      const int n = 256;
      cplx acc = 0.0;
      Eigen::VectorXd y(2);
      for (int k = 0; k < n; ++k) {
        double th = 2.0 * kPi * k / n;
        y << x[0] + rho * std::cos(th), x[1] + rho * std::sin(th);
        acc += phi.eval(y);
      }
      return acc * (2.0 * kPi / n);
    }
    const int nu = 24, nphi = 48;
    const auto& xs = gauss_legendre_nodes(nu);
    const auto& ws = gauss_legendre_weights(nu);
    cplx acc = 0.0;
    Eigen::VectorXd y(3);
    for (int a = 0; a < nu; ++a) {
      double u = xs[a], s = std::sqrt(std::max(0.0, 1.0 - u * u));
      cplx ring = 0.0;
      for (int k = 0; k < nphi; ++k) {
        double ph = 2.0 * kPi * k / nphi;
        y << x[0] + rho * s * std::cos(ph), x[1] + rho * s * std::sin(ph),
            x[2] + rho * u;
        ring += phi.eval(y);
      }
      acc += ws[a] * ring * (2.0 * kPi / nphi);
    }
    return acc;
  };
  if (lambda == 0.0 && d >= 2) return 0.0;
  auto f = [&](double rho) -> cplx {
    cplx kern = free_resolvent_kernel({d, br, lambda, rho});
    return kern * std::pow(rho, d - 1) * shell_mean(rho);
  };
  QuadOptions o = opts;
  o.abs_tol = std::max(opts.abs_tol, 1e-9);
  o.rel_tol = 1e-8;
  return lambda * integrate(f, 1e-9, rho_max, o).value;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(lambda0 > 0.0 && lambda0 < 1.0))
    throw std::domain_error("QuadratureConfig: need 0 < lambda0 < 1");
  if (!(lambda_max >= 1.0))
    throw std::domain_error("QuadratureConfig: need lambda_max >= 1");
  if (!(phase_budget > 0.0 && phase_budget <= M_PI / 2 + 1e-12))
    throw std::domain_error("QuadratureConfig: phase budget must lie in (0, pi/2]");
  if (epsilon_schedule.size() < 3)
    throw std::domain_error("QuadratureConfig: epsilon schedule needs >= 3 entries");
  for (size_t i = 0; i + 1 < epsilon_schedule.size(); ++i)
    if (!(epsilon_schedule[i + 1] < epsilon_schedule[i]) ||
        !(epsilon_schedule[i] > 0.0))
      throw std::domain_error("QuadratureConfig: epsilon schedule must decrease to 0");
  if (degree < 8 || degree > 24)
    throw std::domain_error("QuadratureConfig: degree out of range");
}

cplx scaled_convolved_profile(const Profile& phi, Branch branch, double lambda,
                              const Eigen::VectorXd& x, const QuadOptions& opts) {
  const int d = phi.d;
  if (phi.kind == ProfileKind::band_limited) {
    // the tabulated position profile is slow under adaptive quadrature;
    // the compact Fourier side is exact and cheap
    if (d == 1 || phi.modk.size() == 0 || phi.modk.squaredNorm() == 0.0)
      return scaled_convolved_profile_fourier(phi, branch, lambda, x, opts);
  }
  if (d == 1) return scaled_conv_1d(phi, branch_sign(branch), lambda, x[0], opts);
  if (phi.has_radial_base() && (phi.modk.size() == 0 || phi.modk.squaredNorm() == 0.0)) {
    const double r = (x - phi.tau).norm();
    const cplx base = d == 2
                          ? scaled_conv_2d_radial(phi, branch, lambda, r, opts)
                          : scaled_conv_3d_radial(phi, branch_sign(branch), lambda, r,
                                                  opts);
    return phi.phase * base;
  }
  return scaled_conv_shell(phi, branch, lambda, x, opts);
}

cplx convolved_profile(const Profile& phi, Branch branch, double lambda,
                       const Eigen::VectorXd& x, const QuadOptions& opts) {
  if (!(lambda > 0.0)) throw std::domain_error("convolved_profile: lambda must be > 0");
  return scaled_convolved_profile(phi, branch, lambda, x, opts) / lambda;
}

namespace {

std::vector<double> main_edges(const QuadratureConfig& cfg, double c_hint) {
  std::vector<double> edges;
  const int geo = 30;
  for (int k = geo; k >= 0; --k)
    edges.push_back(cfg.lambda0 * std::pow(kLambdaMin / cfg.lambda0, double(k) / geo));
  double width = std::min(1.5, 20.0 / std::max(c_hint, 1.0));
  for (double x = cfg.lambda0 + width; x < cfg.lambda_max; x += width)
    edges.push_back(x);
  edges.push_back(cfg.lambda_max);
  return edges;
}

std::vector<double> tail_edges(const QuadratureConfig& cfg, double tail_end) {
  // beyond lambda_max the amplitude is a smooth power law (the oscillatory
  // component carries the profile's Fourier tail, which is spent by then);
  // geometric panels suffice and the builder splits if they do not
  std::vector<double> edges;
  double x = cfg.lambda_max;
  while (x < tail_end) {
    edges.push_back(x);
    x *= 1.35;
  }
  edges.push_back(tail_end);
  return edges;
}

// the configured schedule is expressed relative to the tail start: damping
// exp(-eps_hat (lambda/lambda_max)^2) is order one where the tail begins
std::vector<double> scaled_schedule(const QuadratureConfig& cfg, double scale) {
  std::vector<double> eps;
  for (double e : cfg.epsilon_schedule) eps.push_back(e / (scale * scale));
  return eps;
}

}  // namespace

struct KernelEvaluator::Impl {
  ProfileFamily family;
  QuadratureConfig cfg;
  QuadOptions conv_opts{1e-12, 1e-10, 6000, true};
  QuadOptions borel_opts{1e-12, 1e-11, 4000, true};
  double tail_end = 0.0;
  double c_hint_base = 0.0;
  bool trivial = false;

  std::map<double, Eigen::MatrixXcd> scaled_f_plus;
  // key: (conjugated?, branch sign, member, point)
  std::map<std::tuple<int, int, int, std::vector<double>>, std::map<double, cplx>>
      conv;

  struct PsiPair {
    PanelInterpolant main_plus, main_minus, tail_plus, tail_minus;
  };
  std::map<std::pair<std::vector<double>, std::vector<double>>, PsiPair> psi_cache;

  const Eigen::MatrixXcd& scaled_f(double lambda) {
    auto it = scaled_f_plus.find(lambda);
    if (it == scaled_f_plus.end()) {
      it = scaled_f_plus
               .emplace(lambda,
                        scaled_borel_matrix(family, lambda, Branch::plus, borel_opts))
               .first;
    }
    return it->second;
  }

  cplx conv_value(bool conjugated, Branch br, int member, const Eigen::VectorXd& pt,
                  double lambda) {
    std::vector<double> key_pt(pt.data(), pt.data() + pt.size());
    auto key = std::make_tuple(conjugated ? 1 : 0, branch_sign(br), member, key_pt);
    auto& slot = conv[key];
    auto it = slot.find(lambda);
    if (it == slot.end()) {
      const Profile& base = family.members[member];
      // position-space quadrature on the main region, Fourier side in the
      // tail where the oscillatory window has left the profile's support
      auto route = [&](const Profile& p, Branch b) {
        return lambda > cfg.lambda_max + 1e-12
                   ? scaled_convolved_profile_fourier(p, b, lambda, pt, conv_opts)
                   : scaled_convolved_profile(p, b, lambda, pt, conv_opts);
      };
      cplx v;
      if (base.is_real()) {
        // real profile: conjugation is a no-op and branches are conjugate
        if (conjugated) {
          v = conv_value(false, br, member, pt, lambda);
        } else if (br == Branch::minus) {
          v = std::conj(conv_value(false, Branch::plus, member, pt, lambda));
        } else {
          v = route(base, br);
        }
      } else {
        Profile p = conjugated ? conjugate_profile(base) : base;
        v = route(p, br);
      }
      it = slot.emplace(lambda, v).first;
    }
    return it->second;
  }

  // Psi_pm(lambda) = sum_ij [(lambda I + W lambdaF_pm)^{-1} W]_ij
  //                  (lambda h)_i^pm(x) (lambda hbar)_j^pm(y)
  cplx psi(Branch br, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
           double lambda) {
    const int n = family.size();
    Eigen::MatrixXcd lamF = scaled_f(lambda);
    if (br == Branch::minus) lamF = lamF.adjoint().eval();
    Eigen::MatrixXcd lamA = lambda * Eigen::MatrixXcd::Identity(n, n) +
                            Eigen::MatrixXcd(family.weights.asDiagonal()) * lamF;
    Eigen::MatrixXcd M =
        lamA.partialPivLu().solve(Eigen::MatrixXcd(family.weights.asDiagonal()));
    Eigen::VectorXcd hx(n), hy(n);
    for (int i = 0; i < n; ++i) hx[i] = conv_value(false, br, i, x, lambda);
    for (int j = 0; j < n; ++j) hy[j] = conv_value(true, br, j, y, lambda);
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) acc += M(i, j) * hx[i] * hy[j];
    return acc;
  }

  PsiPair& psi_pair(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    std::vector<double> kx(x.data(), x.data() + x.size());
    std::vector<double> ky(y.data(), y.data() + y.size());
    auto it = psi_cache.find({kx, ky});
    if (it != psi_cache.end()) return it->second;
    const double c_hint = c_hint_base + x.norm() + y.norm();
    auto edges_m = main_edges(cfg, c_hint);
    auto edges_t = tail_edges(cfg, tail_end);
    auto build = [&](Branch br, std::span<const double> edges) {
      return PanelInterpolant::build([&](double lam) { return psi(br, x, y, lam); },
                                     edges, cfg.degree, 1e-10, 800);
    };
    PsiPair pair{build(Branch::plus, edges_m), build(Branch::minus, edges_m),
                 build(Branch::plus, edges_t), build(Branch::minus, edges_t)};
    return psi_cache.emplace(std::make_pair(kx, ky), std::move(pair)).first->second;
  }

  OscQuadOptions osc_opts() const {
    OscQuadOptions o;
    o.phase_budget = cfg.phase_budget;
    return o;
  }

  OscQuadResult branch_integral(const PanelInterpolant& main,
                                const PanelInterpolant& tail, double t) {
    auto r = integrate_oscillatory(main, -t, 0.0, osc_opts());
    TailOptions topt;
    topt.osc = osc_opts();
    topt.epsilon_schedule = scaled_schedule(cfg, cfg.lambda_max);
    topt.kind = TailRegularization::gaussian;
    auto rt = integrate_oscillatory_tail([&](double lam) { return tail.eval(lam); },
                                         cfg.lambda_max, -t, 0.0, topt);
    return {r.value + rt.value, r.err + rt.err};
  }
};

KernelEvaluator::KernelEvaluator(ProfileFamily family, QuadratureConfig cfg)
    : impl_(std::make_unique<Impl>()) {
  cfg.validate();
  impl_->family = std::move(family);
  impl_->cfg = cfg;
  const auto& fam = impl_->family;
  impl_->trivial = fam.size() == 0 || fam.weights.cwiseAbs().maxCoeff() == 0.0;
  if (!impl_->trivial) {
    double scale_hint = 0.0;
    for (const auto& m : fam.members)
      scale_hint = std::max(scale_hint, m.position_tail_radius(1e-12) + m.tau.norm());
    impl_->c_hint_base = 2.0 * scale_hint;
    double floor_log = -std::log(1e-18);
    impl_->tail_end =
        cfg.lambda_max * std::sqrt(floor_log / cfg.epsilon_schedule.back()) + 1.0;
    // refuse on a vanishing spectral margin (representation invalid)
    std::vector<double> probe;
    for (int i = 1; i <= 12; ++i) probe.push_back(cfg.lambda_max * i / 12.0);
    auto scan = spectral_condition_scan(fam, probe, impl_->borel_opts);
    if (scan.c0_est <= 1e-6)
      throw singular_system_error(
          "KernelEvaluator: spectral margin vanishes near lambda = " +
          std::to_string(scan.argmin_lambda));
  }
}

KernelEvaluator::~KernelEvaluator() = default;
KernelEvaluator::KernelEvaluator(KernelEvaluator&&) noexcept = default;

const ProfileFamily& KernelEvaluator::family() const { return impl_->family; }
const QuadratureConfig& KernelEvaluator::config() const { return impl_->cfg; }

KernelSample KernelEvaluator::operator()(double t, const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& y) {
  if (t == 0.0) throw std::domain_error("KernelEvaluator: t must be nonzero");
  KernelSample out;
  out.t = t;
  out.x = x;
  out.y = y;
  const int d = impl_->family.size() ? impl_->family.dim()
                                     : static_cast<int>(x.size());
  double r = (x - y).norm();
  out.free_value = t > 0.0 ? free_propagator_kernel(d, t, r)
                           : std::conj(free_propagator_kernel(d, -t, r));
  if (impl_->trivial) {
    out.diff_value = 0.0;
    out.err_est = 0.0;
    return out;
  }
  auto& pair = impl_->psi_pair(x, y);
  auto plus = impl_->branch_integral(pair.main_plus, pair.tail_plus, t);
  auto minus = impl_->branch_integral(pair.main_minus, pair.tail_minus, t);
  const cplx i_over_pi(0.0, 1.0 / kPi);
  out.diff_value = i_over_pi * (plus.value - minus.value);
  out.err_est = (plus.err + minus.err) / kPi;
  if (impl_->cfg.cross_check) {
    QuadratureConfig alt = impl_->cfg;
    alt.cross_check = false;
    alt.lambda_max = 2.0 * impl_->cfg.lambda_max;
    alt.phase_budget = 0.5 * impl_->cfg.phase_budget;
    KernelEvaluator other(impl_->family, alt);
    KernelSample check = other(t, x, y);
    out.err_est = std::max(out.err_est, std::abs(check.diff_value - out.diff_value));
  }
  return out;
}

OscLambdaResult oscillatory_lambda_quadrature(const Integrand& psi, double t,
                                              double c, double lo, double hi,
                                              const QuadratureConfig& cfg) {
  cfg.validate();
  if (t == 0.0) throw std::domain_error("oscillatory_lambda_quadrature: t = 0");
  OscQuadOptions o;
  o.phase_budget = cfg.phase_budget;
  const bool unbounded = !std::isfinite(hi);
  const double main_hi = unbounded ? cfg.lambda_max : hi;
  std::vector<double> edges;
  const int m = 12;
  for (int i = 0; i <= m; ++i) edges.push_back(lo + (main_hi - lo) * i / m);
  auto interp = PanelInterpolant::build(psi, edges, cfg.degree, 1e-11, 800);
  auto r = integrate_oscillatory(interp, -t, c, o);
  OscLambdaResult out{r.value, r.err};
  if (unbounded) {
    TailOptions topt;
    topt.osc = o;
    topt.epsilon_schedule = scaled_schedule(cfg, main_hi);
    auto rt = integrate_oscillatory_tail(psi, main_hi, -t, c, topt);
    out.value += rt.value;
    out.err_est += rt.err;
  }
  return out;
}

KernelSample rank_one_difference_kernel(const Profile& phi, double alpha, double t,
                                        const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& y,
                                        const QuadratureConfig& cfg) {
  if (alpha < 0.0) throw std::domain_error("rank_one_difference_kernel: alpha < 0");
  ProfileFamily fam;
  fam.members = {phi};
  fam.weights = Eigen::VectorXd::Constant(1, alpha);
  KernelEvaluator eval(std::move(fam), cfg);
  return eval(t, x, y);
}

KernelSample finite_rank_difference_kernel(const ProfileFamily& f, double t,
                                           const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& y,
                                           const QuadratureConfig& cfg) {
  KernelEvaluator eval(f, cfg);
  return eval(t, x, y);
}

std::vector<TraceKernelResult> trace_class_partial_sums(const ProfileFamily& f,
                                                        double t,
                                                        const Eigen::VectorXd& x,
                                                        const Eigen::VectorXd& y,
                                                        int j_max,
                                                        const QuadratureConfig& cfg) {
  if (j_max < 1) throw std::domain_error("trace_class_difference_kernel: j_max < 1");
  if (!f.fourier_disjoint())
    throw std::domain_error(
        "trace_class_difference_kernel: family must be Fourier-disjoint");
  const int n = std::min<int>(j_max, f.size());
  const int d = f.dim();
  const int smooth_exp = 2 * static_cast<int>(std::floor(d / 2.0)) + 6;
  std::vector<TraceKernelResult> out;
  cplx running = 0.0;
  double running_err = 0.0;
  double calib = 0.0;
  std::vector<double> member_scales;
  for (int j = 0; j < n; ++j) {
    ProfileFamily single;
    single.members = {f.members[j]};
    single.weights = Eigen::VectorXd::Constant(1, f.weights[j]);
    KernelEvaluator eval(std::move(single), cfg);
    KernelSample s = eval(t, x, y);
    running += s.diff_value;
    running_err += s.err_est;
    double scale = f.weights[j] * std::pow(f.members[j].smooth_M, smooth_exp);
    member_scales.push_back(scale);
    if (j < 2)
      calib = std::max(calib, std::abs(s.diff_value) * std::pow(t, 0.5 * d) / scale);
    TraceKernelResult r;
    r.sample.t = t;
    r.sample.x = x;
    r.sample.y = y;
    r.sample.free_value = free_propagator_kernel(d, t, (x - y).norm());
    r.sample.diff_value = running;
    r.sample.err_est = running_err;
    out.push_back(r);
  }
  // remainder majorants: calibrated constant times the dropped member sums
  for (int cut = 0; cut < n; ++cut) {
    double tail_sum = 0.0;
    for (int j = cut + 1; j < f.size() + 40; ++j) {
      double mj, wj;
      if (j < f.size()) {
        mj = f.members[j].smooth_M;
        wj = f.weights[j];
      } else {
        // continue the family schema: offsets L + 2(j+1), weights 2^{-(j+1)}
        double kn = f.modulation_offset + 2.0 * (j + 1);
        mj = f.members.front().M * std::pow(1.0 + kn, std::floor(d / 2.0) + 1.0);
        wj = std::pow(2.0, -(j + 1));
      }
      double term = wj * std::pow(mj, smooth_exp);
      tail_sum += term;
      if (term < 1e-18 * tail_sum) break;
    }
    out[cut].tail_bound = calib * tail_sum * std::pow(t, -0.5 * d);
  }
  return out;
}

TraceKernelResult trace_class_difference_kernel(const ProfileFamily& f, double t,
                                                const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& y, int j_max,
                                                const QuadratureConfig& cfg) {
  return trace_class_partial_sums(f, t, x, y, j_max, cfg).back();
}

cplx full_propagator_kernel(KernelEvaluator& eval, double t,
                            const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  KernelSample s = eval(t, x, y);
  return s.free_value + s.diff_value;
}

}  // namespace akprop
