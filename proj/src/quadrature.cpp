#include "akprop/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace akprop {
namespace {

// QUADPACK (G7, K15) abscissae and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double a, b;
  std::complex<double> value;
  double err;
  bool operator<(const Interval& o) const { return err < o.err; }
};

Interval gk15(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::complex<double> fc = f(c);
  std::complex<double> kron = kWgk[7] * fc;
  std::complex<double> gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    std::complex<double> fsum = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
    kron += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

QuadResult adapt(const Integrand& f, std::vector<Interval> work,
                 const QuadOptions& opts) {
  std::priority_queue<Interval> heap(work.begin(), work.end());
  std::complex<double> total = 0.0;
  double err = 0.0;
  long long nevals = 15LL * static_cast<long long>(work.size());
  for (const auto& iv : work) {
    total += iv.value;
    err += iv.err;
  }
  int used = static_cast<int>(work.size());
  while (err > opts.abs_tol && err > opts.rel_tol * std::abs(total)) {
    if (used >= opts.max_intervals || heap.empty()) {
      if (opts.throw_on_failure)
        throw quadrature_error("adaptive quadrature failed to converge: err=" +
                               std::to_string(err) + " after " +
                               std::to_string(used) + " intervals");
      break;
    }
    Interval top = heap.top();
    heap.pop();
    double mid = 0.5 * (top.a + top.b);
    if (mid <= top.a || mid >= top.b) continue;  // interval at rounding floor
    Interval left = gk15(f, top.a, mid);
    Interval right = gk15(f, mid, top.b);
    nevals += 30;
    total += left.value + right.value - top.value;
    err += left.err + right.err - top.err;
    heap.push(left);
    heap.push(right);
    ++used;
  }
  return {total, err, nevals};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b,
                     const QuadOptions& opts) {
  if (a == b) return {0.0, 0.0, 0};
  return adapt(f, {gk15(f, a, b)}, opts);
}

QuadResult integrate_segments(const Integrand& f, std::span<const double> pts,
                              const QuadOptions& opts) {
  std::vector<Interval> work;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    if (pts[i] < pts[i + 1]) work.push_back(gk15(f, pts[i], pts[i + 1]));
  if (work.empty()) return {0.0, 0.0, 0};
  return adapt(f, std::move(work), opts);
}

QuadResult pv_integrate(const Integrand& g, double lambda, double rho_max,
                        const QuadOptions& opts) {
  if (!(lambda > 0.0) || !(lambda < rho_max))
    throw quadrature_error("pv_integrate: pole outside (0, rho_max)");
  // Subtraction window [0, B] with B of order one even when lambda is tiny:
  // the 1/lambda pieces of the split cancel inside the closed-form log term
  // instead of between large quadrature values.
  const double B = std::min(rho_max, std::max(1.0, 2.0 * lambda));
  const std::complex<double> glam = g(lambda);
  const double near_scale = std::min(lambda, B - lambda);
  const double h_fd = 1e-3 * near_scale;
  const std::complex<double> dg =
      (g(lambda + h_fd) - g(lambda - h_fd)) / (2.0 * h_fd);
  auto subtracted = [&](double rho) -> std::complex<double> {
    double s = rho - lambda;
    if (std::abs(s) < 1e-5 * near_scale) return dg / (rho + lambda);
    return (g(rho) - glam) / (s * (rho + lambda));
  };
  QuadResult core =
      integrate_segments(subtracted, std::array{0.0, lambda, B}, opts);
  // P.V. int_0^B drho/(rho^2 - lambda^2) = (1/2lam) log((B - lam)/(B + lam))
  std::complex<double> logterm =
      glam * std::log((B - lambda) / (B + lambda)) / (2.0 * lambda);
  auto plain = [&](double rho) { return g(rho) / (rho * rho - lambda * lambda); };
  QuadResult rest =
      (B < rho_max) ? integrate(plain, B, rho_max, opts) : QuadResult{};
  return {core.value + logterm + rest.value, core.err + rest.err,
          core.nevals + rest.nevals + 3};
}

namespace {

std::map<int, std::pair<std::vector<double>, std::vector<double>>> gl_cache;
std::mutex gl_mutex;

// Newton iteration on P_n with the standard interlacing initial guesses.
void build_gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

const std::vector<double>& gauss_legendre_nodes(int n) {
  std::lock_guard<std::mutex> lock(gl_mutex);
  auto& entry = gl_cache[n];
  if (entry.first.empty()) build_gauss_legendre(n, entry.first, entry.second);
  return entry.first;
}

const std::vector<double>& gauss_legendre_weights(int n) {
  std::lock_guard<std::mutex> lock(gl_mutex);
  auto& entry = gl_cache[n];
  if (entry.first.empty()) build_gauss_legendre(n, entry.first, entry.second);
  return entry.second;
}

std::complex<double> gauss_legendre(const Integrand& f, double a, double b, int n) {
  const auto& x = gauss_legendre_nodes(n);
  const auto& w = gauss_legendre_weights(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  std::complex<double> sum = 0.0;
  for (int i = 0; i < n; ++i) sum += w[i] * f(c + h * x[i]);
  return h * sum;
}

QuadResult integrate_box(
    const std::function<std::complex<double>(std::span<const double>)>& f,
    int dim, double lo, double hi, const QuadOptions& opts) {
  if (dim < 1 || dim > 3)
    throw quadrature_error("integrate_box: dim must be 1, 2 or 3");
  std::vector<double> point(dim, 0.0);
  long long nevals = 0;
  // inner axes integrate with slightly tighter tolerance than the outer
  std::function<std::complex<double>(int)> nest = [&](int axis) {
    QuadOptions axis_opts = opts;
    axis_opts.abs_tol = opts.abs_tol * std::pow(0.3, dim - 1 - axis);
    Integrand g = [&, axis](double x) -> std::complex<double> {
      point[axis] = x;
      if (axis + 1 == dim) {
        ++nevals;
        return f(point);
      }
      return nest(axis + 1);
    };
    return integrate(g, lo, hi, axis_opts).value;
  };
  std::complex<double> v = nest(0);
  return {v, opts.abs_tol, nevals};
}

}  // namespace akprop
