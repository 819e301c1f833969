#include "akprop/profiles.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace akprop {
namespace {

constexpr double kPi = 3.14159265358979323846;

double sphere_area(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: throw std::domain_error("profiles: dimension must be 1, 2 or 3");
  }
}

double bump_sq(double u) {  // exp(-2/(1-u^2)) inside the unit ball
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-2.0 / (1.0 - u * u));
}

double bump1(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

// deterministic direction set for decay sweeps
std::vector<Eigen::VectorXd> sweep_directions(int d) {
  std::vector<Eigen::VectorXd> dirs;
  if (d == 1) {
    dirs.push_back(Eigen::VectorXd::Constant(1, 1.0));
    dirs.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return dirs;
  }
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(double(d)));
  dirs.push_back(diag);
  dirs.push_back(-diag);
  if (d >= 2) {
    Eigen::VectorXd mixed = Eigen::VectorXd::Zero(d);
    mixed[0] = 0.6;
    mixed[1] = -0.8;
    dirs.push_back(mixed);
  }
  return dirs;
}

double calibrate_decay_amplitude(const Profile& p) {
  double m = 0.0;
  const auto dirs = sweep_directions(p.d);
  const double r_hi = std::max(10.0, p.position_tail_radius(1e-14));
  for (const auto& dir : dirs) {
    for (int i = 0; i <= 400; ++i) {
      double r = r_hi * i / 400.0;
      Eigen::VectorXd x = p.tau + r * dir;
      double val = std::abs(p.eval(x)) * std::pow(1.0 + r * r, 0.5 * p.delta);
      m = std::max(m, val);
    }
  }
  return 1.05 * m;
}

}  // namespace

double RadialTable::operator()(double r) const {
  r = std::abs(r);
  const double u = r / h;
  const auto n = static_cast<long>(values.size());
  long i = static_cast<long>(u);
  if (i >= n - 1) return 0.0;
  // 4-point Lagrange on the uniform grid (clamped at the ends)
  long i0 = std::max(0L, std::min(i - 1, n - 4));
  double t = u - i0;
  const double* v = values.data() + i0;
  double c0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
  double c1 = t * (t - 2) * (t - 3) / 2.0;
  double c2 = -t * (t - 1) * (t - 3) / 2.0;
  double c3 = t * (t - 1) * (t - 2) / 6.0;
  return c0 * v[0] + c1 * v[1] + c2 * v[2] + c3 * v[3];
}

cplx Profile::eval(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x - tau;
  cplx v = base_eval(y);
  if (modk.size() > 0 && modk.squaredNorm() > 0.0)
    v *= expi(modk.dot(x));
  return phase * v;
}

cplx Profile::base_eval(const Eigen::VectorXd& y) const {
  const double r = y.norm();
  switch (kind) {
    case ProfileKind::gaussian:
      return normalization * std::exp(-r * r / (2.0 * scale * scale));
    case ProfileKind::zero_mean:
      return normalization * y[0] * std::exp(-r * r / (2.0 * scale * scale));
    case ProfileKind::band_limited:
      return (*table)(r);
  }
  return 0.0;
}

cplx Profile::fourier(const Eigen::VectorXd& xi) const {
  Eigen::VectorXd shifted = xi - modk;
  return phase * expi(-shifted.dot(tau)) * base_fourier(shifted);
}

cplx Profile::base_fourier(const Eigen::VectorXd& xi) const {
  const double rho = xi.norm();
  switch (kind) {
    case ProfileKind::gaussian:
    case ProfileKind::band_limited:
      return radial_fourier(rho);
    case ProfileKind::zero_mean: {
      const double w = scale;
      double gauss = std::pow(w, d + 2) * std::exp(-0.5 * w * w * rho * rho);
      return cplx(0.0, -1.0) * normalization * xi[0] * gauss;
    }
  }
  return 0.0;
}

double Profile::radial_position(double r) const {
  switch (kind) {
    case ProfileKind::gaussian:
      return normalization * std::exp(-r * r / (2.0 * scale * scale));
    case ProfileKind::band_limited:
      return (*table)(r);
    default:
      throw std::domain_error("profile: no radial position base");
  }
}

double Profile::radial_fourier(double rho) const {
  switch (kind) {
    case ProfileKind::gaussian:
      return normalization * std::pow(scale, d) * std::exp(-0.5 * scale * scale * rho * rho);
    case ProfileKind::band_limited:
      return normalization * bump1(rho / scale);
    default:
      throw std::domain_error("profile: no radial fourier base");
  }
}

bool Profile::is_real() const {
  return (modk.size() == 0 || modk.squaredNorm() == 0.0) &&
         std::abs(phase.imag()) == 0.0;
}

bool Profile::is_plain_radial() const {
  return has_radial_base() && (modk.size() == 0 || modk.squaredNorm() == 0.0);
}

double Profile::fourier_envelope(double rho) const {
  switch (kind) {
    case ProfileKind::gaussian:
      return std::abs(radial_fourier(rho));
    case ProfileKind::zero_mean: {
      double w = scale;
      return normalization * std::pow(w, d + 2) * rho *
             std::exp(-0.5 * w * w * rho * rho);
    }
    case ProfileKind::band_limited:
      return rho < scale ? normalization : 0.0;
  }
  return 0.0;
}

double Profile::fourier_tail_radius(double eps) const {
  if (kind == ProfileKind::band_limited) return scale;
  double rho = 1.0;
  while (fourier_envelope(rho) > eps && rho < 1e4) rho *= 1.25;
  return rho;
}

double Profile::position_tail_radius(double eps) const {
  if (kind == ProfileKind::band_limited) {
    const auto& tab = *table;
    double r = tab.r_max();
    for (long i = static_cast<long>(tab.values.size()) - 1; i >= 0; --i) {
      if (std::abs(tab.values[i]) > eps) break;
      r = tab.h * i;
    }
    return r;
  }
  double r = 1.0;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  while (r < 1e4) {
    x[0] = r;
    if (std::abs(base_eval(x)) <= eps) break;
    r *= 1.25;
  }
  return r;
}

Profile make_gaussian_profile(int d, double width) {
  if (!(width > 0.0)) throw std::domain_error("make_gaussian_profile: width <= 0");
  sphere_area(d);  // validates d
  Profile p;
  p.d = d;
  p.kind = ProfileKind::gaussian;
  p.scale = width;
  p.tau = Eigen::VectorXd::Zero(d);
  p.modk = Eigen::VectorXd::Zero(d);
  p.normalization = std::pow(width * std::sqrt(kPi), -0.5 * d);
  p.mean = p.normalization * std::pow(width * std::sqrt(2.0 * kPi), d);
  p.delta = d + 2.0;
  p.M = calibrate_decay_amplitude(p);
  p.smooth_M = p.M;
  return p;
}

Profile make_zero_mean_profile(int d, double width) {
  if (!(width > 0.0)) throw std::domain_error("make_zero_mean_profile: width <= 0");
  sphere_area(d);
  Profile p;
  p.d = d;
  p.kind = ProfileKind::zero_mean;
  p.scale = width;
  p.tau = Eigen::VectorXd::Zero(d);
  p.modk = Eigen::VectorXd::Zero(d);
  p.normalization = std::pow(width * std::sqrt(kPi), -0.5 * d) * std::sqrt(2.0) / width;
  p.mean = 0.0;
  p.delta = d + 2.0;
  p.M = calibrate_decay_amplitude(p);
  p.smooth_M = p.M;
  return p;
}

Profile make_band_limited_profile(int d, double fourier_radius) {
  if (!(fourier_radius > 0.0))
    throw std::domain_error("make_band_limited_profile: radius <= 0");
  sphere_area(d);
  static std::map<std::pair<int, double>, Profile> cache;
  static std::mutex cache_mutex;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find({d, fourier_radius});
    if (it != cache.end()) return it->second;
  }
  Profile p;
  p.d = d;
  p.kind = ProfileKind::band_limited;
  p.scale = fourier_radius;
  p.tau = Eigen::VectorXd::Zero(d);
  p.modk = Eigen::VectorXd::Zero(d);
  p.fourier_radius = fourier_radius;
  // normalize the Fourier bump: S_{d-1} int_0^R c^2 bump^2 rho^{d-1} = 1
  const double R = fourier_radius;
  auto b2 = [&](double rho) -> cplx {
    return bump_sq(rho / R) * std::pow(rho, d - 1);
  };
  double norm2 = integrate(b2, 0.0, R, {1e-14, 1e-13}).value.real() * sphere_area(d);
  p.normalization = 1.0 / std::sqrt(norm2);

  // position-space radial table A(r) = int_0^R Ahat(rho) Jt_{d/2-1}(rho r) rho^{d-1} drho.
  // The bump is non-analytic at rho = R; fixed segments refined geometrically
  // toward the edge recover full accuracy.
  std::vector<double> edges;
  {
    const int osc_segments = 8;  // refined further per r below
    for (int si = 0; si < osc_segments; ++si) edges.push_back(0.9 * R * si / osc_segments);
    for (int j = 0; j <= 30; ++j)
      edges.push_back(R * (1.0 - 0.1 * std::pow(0.5, j)));
    edges.push_back(R);
  }
  auto table = std::make_shared<RadialTable>();
  table->h = 0.01 / std::max(1.0, R);
  const double c = p.normalization;
  int consecutive_small = 0;
  for (long i = 0; i < 100000; ++i) {
    const double r = table->h * i;
    cplx acc = 0.0;
    for (size_t e = 0; e + 1 < edges.size(); ++e) {
      double a = edges[e], b = edges[e + 1];
      int sub = std::max(1, static_cast<int>((b - a) * r / 4.0));
      for (int si = 0; si < sub; ++si) {
        double aa = a + (b - a) * si / sub, bb = a + (b - a) * (si + 1) / sub;
        acc += gauss_legendre(
            [&](double rho) -> cplx {
              return c * bump1(rho / R) * bessel_j_over_znu(d - 2, rho * r) *
                     std::pow(rho, d - 1);
            },
            aa, bb, 20);
      }
    }
    table->values.push_back(acc.real());
    if (std::abs(acc.real()) < 1e-16)
      ++consecutive_small;
    else
      consecutive_small = 0;
    if ((consecutive_small > 200 && r > 20.0) || r > 240.0) break;
  }
  p.table = table;
  p.mean = std::pow(2.0 * kPi, 0.5 * d) * p.base_fourier(Eigen::VectorXd::Zero(d));
  p.delta = d + 2.0;
  p.M = calibrate_decay_amplitude(p);
  p.smooth_M = p.M;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(std::make_pair(d, fourier_radius), p);
  }
  return p;
}

Profile translate(const Profile& p, const Eigen::VectorXd& tau) {
  Profile q = p;
  q.tau += tau;
  // phi(x - tau0) with phi carrying modulation e^{ik.x} picks up e^{-ik.tau0}
  if (q.modk.size() > 0 && q.modk.squaredNorm() > 0.0)
    q.phase *= expi(-q.modk.dot(tau));
  return q;
}

Profile modulate(const Profile& p, const Eigen::VectorXd& k) {
  Profile q = p;
  if (q.modk.size() == 0) q.modk = Eigen::VectorXd::Zero(q.d);
  q.modk += k;
  q.mean = 0.0;  // stale; recomputed below from the Fourier side
  q.mean = std::pow(2.0 * kPi, 0.5 * q.d) * q.fourier(Eigen::VectorXd::Zero(q.d));
  const double kn = q.modk.norm();
  q.smooth_M = q.M * std::pow(1.0 + kn, std::floor(q.d / 2.0) + 1.0);
  return q;
}

bool ProfileFamily::all_real() const {
  for (const auto& m : members)
    if (!m.is_real()) return false;
  return true;
}

bool ProfileFamily::fourier_disjoint() const {
  if (size() < 2) return true;
  for (int i = 0; i < size(); ++i) {
    if (!members[i].fourier_radius) return false;
    for (int j = i + 1; j < size(); ++j) {
      if (!members[j].fourier_radius) return false;
      double dist = (members[i].modk - members[j].modk).norm();
      if (dist < *members[i].fourier_radius + *members[j].fourier_radius)
        return false;
    }
  }
  return true;
}

ProfileFamily make_translated_family(const Profile& base, int n, double tau0,
                                     double weight) {
  ProfileFamily f;
  f.weights = Eigen::VectorXd::Constant(n, weight);
  f.tau0 = n > 1 ? tau0 : 0.0;
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(base.d);
  e1[0] = 1.0;
  for (int i = 0; i < n; ++i) f.members.push_back(translate(base, i * tau0 * e1));
  return f;
}

ProfileFamily make_fourier_disjoint_family(int d, int n, double offset,
                                           bool geometric_weights) {
  Profile base = make_band_limited_profile(d, 1.0);
  ProfileFamily f;
  f.modulation_offset = offset;
  f.weights.resize(n);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(d);
  e1[0] = 1.0;
  for (int j = 1; j <= n; ++j) {
    f.members.push_back(modulate(base, (offset + 2.0 * j) * e1));
    f.weights[j - 1] = geometric_weights ? std::pow(2.0, -j) : 1.0;
  }
  return f;
}

Eigen::MatrixXcd gram_matrix(const ProfileFamily& f, const QuadOptions& opts) {
  const int n = f.size();
  const int d = f.dim();
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Profile& pi = f.members[i];
      const Profile& pj = f.members[j];
      if (pi.d != pj.d) throw std::domain_error("gram_matrix: mixed dimensions");
      double R = std::max(pi.position_tail_radius(1e-14) + pi.tau.norm(),
                          pj.position_tail_radius(1e-14) + pj.tau.norm());
      auto integrand = [&](std::span<const double> pt) -> cplx {
        Eigen::Map<const Eigen::VectorXd> x(pt.data(), d);
        return pi.eval(x) * std::conj(pj.eval(x));
      };
      QuadOptions o = opts;
      o.abs_tol = std::max(opts.abs_tol, 1e-10);
      o.rel_tol = 1e-9;
      g(i, j) = integrate_box(integrand, d, -R, R, o).value;
      if (i != j) g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

cplx fourier_transform(const Profile& p, const Eigen::VectorXd& xi) {
  return p.fourier(xi);
}

cplx fourier_transform_quadrature(const Profile& p, const Eigen::VectorXd& xi,
                                  const QuadOptions& opts) {
  const double R = p.position_tail_radius(1e-14) + p.tau.norm();
  auto integrand = [&](std::span<const double> pt) -> cplx {
    Eigen::Map<const Eigen::VectorXd> x(pt.data(), p.d);
    return expi(-xi.dot(x)) * p.eval(x);
  };
  auto q = integrate_box(integrand, p.d, -R, R, opts);
  return std::pow(2.0 * kPi, -0.5 * p.d) * q.value;
}

DecayCheck verify_decay(const Profile& p, int sample_count) {
  if (sample_count < 100)
    throw std::domain_error("verify_decay: need at least 100 samples");
  DecayCheck out;
  const auto dirs = sweep_directions(p.d);
  const int per_dir = std::max(1, sample_count / static_cast<int>(dirs.size()));
  const double r_hi = std::max(10.0, p.position_tail_radius(1e-14));
  for (const auto& dir : dirs) {
    for (int i = 0; i <= per_dir; ++i) {
      double r = r_hi * i / per_dir;
      Eigen::VectorXd x = p.tau + r * dir;
      double val = std::abs(p.eval(x)) * std::pow(1.0 + r * r, 0.5 * p.delta);
      out.M_est = std::max(out.M_est, val);
    }
  }
  out.pass = out.M_est <= p.M;
  return out;
}

}  // namespace akprop
