#include "akprop/oscint.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

namespace akprop {
namespace {

std::vector<double> cheb_nodes(int n) {  // descending: +1 ... -1
  std::vector<double> u(n + 1);
  for (int j = 0; j <= n; ++j) u[j] = std::cos(M_PI * j / n);
  return u;
}

std::vector<cplx> cheb_coeffs(const std::vector<cplx>& v) {
  const int n = static_cast<int>(v.size()) - 1;
  std::vector<cplx> c(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    cplx acc = 0.5 * (v[0] + (k % 2 == 0 ? v[n] : -v[n]));
    for (int j = 1; j < n; ++j) acc += v[j] * std::cos(M_PI * j * k / n);
    c[k] = acc * (2.0 / n);
  }
  c[0] *= 0.5;
  c[n] *= 0.5;
  return c;
}

cplx cheb_eval(const std::vector<cplx>& c, double u) {
  cplx b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    cplx b0 = 2.0 * u * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return u * b1 - b2 + c[0];
}

// Chebyshev-Lobatto differentiation matrix (nodes descending).
Eigen::MatrixXd cheb_diff(int n) {
  auto u = cheb_nodes(n);
  Eigen::MatrixXd D(n + 1, n + 1);
  auto cf = [&](int j) { return (j == 0 || j == n) ? 2.0 : 1.0; };
  for (int j = 0; j <= n; ++j) {
    double rowsum = 0.0;
    for (int k = 0; k <= n; ++k) {
      if (j == k) continue;
      double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
      D(j, k) = (cf(j) / cf(k)) * sign / (u[j] - u[k]);
      rowsum += D(j, k);
    }
    D(j, j) = -rowsum;
  }
  return D;
}

struct PhaseInfo {
  double a, b;
  double phi(double x) const { return (a * x + b) * x; }
  double dphi(double x) const { return 2.0 * a * x + b; }
  bool has_stationary() const { return a != 0.0; }
  double stationary() const { return -b / (2.0 * a); }
  double variation(double lo, double hi) const {
    double p1 = phi(lo), p2 = phi(hi);
    double mn = std::min(p1, p2), mx = std::max(p1, p2);
    if (has_stationary()) {
      double xs = stationary();
      if (xs > lo && xs < hi) {
        mn = std::min(mn, phi(xs));
        mx = std::max(mx, phi(xs));
      }
    }
    return mx - mn;
  }
};

OscQuadResult direct_panel(const Integrand& psi, const PhaseInfo& ph, double lo,
                           double hi, double budget) {
  double V = ph.variation(lo, hi);
  int m = std::max(1, static_cast<int>(std::ceil(V / budget)));
  cplx total = 0.0;
  double err = 0.0;
  for (int s = 0; s < m; ++s) {
    double a = lo + (hi - lo) * s / m, b = lo + (hi - lo) * (s + 1) / m;
    auto f = [&](double x) { return psi(x) * expi(ph.phi(x)); };
    cplx fine = gauss_legendre(f, a, b, 20);
    cplx coarse = gauss_legendre(f, a, b, 14);
    total += fine;
    err += std::abs(fine - coarse);
  }
  return {total, err};
}

OscQuadResult levin_panel(const Integrand& psi, const PhaseInfo& ph, double lo,
                          double hi, int order) {
  static thread_local std::map<int, Eigen::MatrixXd> dcache;
  auto it = dcache.find(order);
  if (it == dcache.end()) it = dcache.emplace(order, cheb_diff(order)).first;
  const Eigen::MatrixXd& D = it->second;
  const auto u = cheb_nodes(order);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  const int n = order;
  Eigen::MatrixXcd M = D.cast<cplx>() / half;
  Eigen::VectorXcd rhs(n + 1);
  for (int j = 0; j <= n; ++j) {
    double x = mid + half * u[j];
    M(j, j) += cplx(0.0, ph.dphi(x));
    rhs[j] = psi(x);
  }
  Eigen::VectorXcd sol = M.colPivHouseholderQr().solve(rhs);
  return {sol[0] * expi(ph.phi(hi)) - sol[n] * expi(ph.phi(lo)), 0.0};
}

OscQuadResult process_span(const Integrand& psi, const PhaseInfo& ph, double lo,
                           double hi, const OscQuadOptions& opts, int depth) {
  const double V = ph.variation(lo, hi);
  if (V <= opts.levin_threshold || depth >= 60)
    return direct_panel(psi, ph, lo, hi, opts.phase_budget);
  const double w = hi - lo;
  if (ph.has_stationary()) {
    double xs = ph.stationary();
    if (xs > lo - opts.stationary_margin * w && xs < hi + opts.stationary_margin * w) {
      double split = std::clamp(xs, lo + 0.25 * w, hi - 0.25 * w);
      auto left = process_span(psi, ph, lo, split, opts, depth + 1);
      auto right = process_span(psi, ph, split, hi, opts, depth + 1);
      return {left.value + right.value, left.err + right.err};
    }
  }
  auto fine = levin_panel(psi, ph, lo, hi, opts.levin_order);
  auto check = levin_panel(psi, ph, lo, hi, opts.levin_order - 4);
  double err = std::abs(fine.value - check.value);
  if (err > 1e-9 * (1.0 + std::abs(fine.value)) && depth < 24) {
    double split = 0.5 * (lo + hi);
    auto left = process_span(psi, ph, lo, split, opts, depth + 1);
    auto right = process_span(psi, ph, split, hi, opts, depth + 1);
    return {left.value + right.value, left.err + right.err};
  }
  return {fine.value, err};
}

}  // namespace

PanelInterpolant PanelInterpolant::build(const Integrand& f,
                                         std::span<const double> edges, int degree,
                                         double tol, int max_splits) {
  PanelInterpolant out;
  const auto u = cheb_nodes(degree);
  auto make_panel = [&](double lo, double hi) {
    Panel p;
    p.lo = lo;
    p.hi = hi;
    p.values.resize(degree + 1);
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int j = 0; j <= degree; ++j) p.values[j] = f(mid + half * u[j]);
    p.coeffs = cheb_coeffs(p.values);
    return p;
  };
  std::vector<Panel> work;
  for (size_t i = 0; i + 1 < edges.size(); ++i)
    if (edges[i] < edges[i + 1]) work.push_back(make_panel(edges[i], edges[i + 1]));
  if (work.empty()) throw std::domain_error("PanelInterpolant: no panels (bad edges)");
  double scale = 1e-300;
  for (const auto& p : work)
    for (const auto& v : p.values) scale = std::max(scale, std::abs(v));
  int splits = 0;
  for (size_t idx = 0; idx < work.size(); ++idx) {
    const auto& c = work[idx].coeffs;
    double tail = std::abs(c[degree]) + std::abs(c[degree - 1]);
    if (tail > tol * scale && splits < max_splits) {
      double mid = 0.5 * (work[idx].lo + work[idx].hi);
      if (mid > work[idx].lo && mid < work[idx].hi) {
        Panel left = make_panel(work[idx].lo, mid);
        Panel right = make_panel(mid, work[idx].hi);
        work[idx] = std::move(left);
        work.insert(work.begin() + idx + 1, std::move(right));
        ++splits;
        --idx;  // revisit the left half
        continue;
      }
    }
  }
  out.panels_ = std::move(work);
  return out;
}

cplx PanelInterpolant::eval(double x) const {
  size_t lo = 0, hi = panels_.size() - 1;
  if (x <= panels_.front().lo) {
    lo = 0;
  } else if (x >= panels_.back().hi) {
    lo = panels_.size() - 1;
  } else {
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (x < panels_[mid].lo)
        hi = mid - 1;
      else if (x > panels_[mid].hi)
        lo = mid + 1;
      else {
        lo = mid;
        break;
      }
    }
  }
  const Panel& p = panels_[lo];
  double u = (2.0 * x - p.lo - p.hi) / (p.hi - p.lo);
  return cheb_eval(p.coeffs, std::clamp(u, -1.0, 1.0));
}

OscQuadResult integrate_oscillatory(const PanelInterpolant& psi, double a, double b,
                                    const OscQuadOptions& opts) {
  PhaseInfo ph{a, b};
  cplx total = 0.0;
  double err = 0.0;
  auto eval = [&psi](double x) { return psi.eval(x); };
  for (const auto& p : psi.panels()) {
    auto r = process_span(eval, ph, p.lo, p.hi, opts, 0);
    total += r.value;
    err += r.err;
  }
  return {total, err};
}

OscQuadResult integrate_oscillatory_fn(const Integrand& psi,
                                       std::span<const double> edges, double a,
                                       double b, const OscQuadOptions& opts) {
  PhaseInfo ph{a, b};
  cplx total = 0.0;
  double err = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i] >= edges[i + 1]) continue;
    auto r = process_span(psi, ph, edges[i], edges[i + 1], opts, 0);
    total += r.value;
    err += r.err;
  }
  return {total, err};
}

OscQuadResult integrate_oscillatory_tail(const Integrand& psi, double lo, double a,
                                         double b, const TailOptions& opts) {
  if (opts.epsilon_schedule.size() < 3)
    throw extrapolation_error("tail: epsilon schedule needs at least 3 entries");
  for (size_t i = 0; i + 1 < opts.epsilon_schedule.size(); ++i)
    if (opts.epsilon_schedule[i + 1] >= opts.epsilon_schedule[i])
      throw extrapolation_error("tail: epsilon schedule must decrease strictly");

  const double log_floor = -std::log(opts.amplitude_floor);
  std::vector<cplx> values;
  double quad_noise = 0.0;
  for (double eps : opts.epsilon_schedule) {
    double cutoff = opts.kind == TailRegularization::gaussian
                        ? std::sqrt(log_floor / eps)
                        : lo + log_floor / eps;
    cutoff = std::max(cutoff, lo * 1.5 + 1.0);
    std::vector<double> edges;
    double x = lo;
    edges.push_back(x);
    while (x < cutoff) {
      double reg_cap = opts.kind == TailRegularization::gaussian
                           ? 2.0 / (eps * std::max(x, 1.0))
                           : 4.0 / eps;
      double w = std::min(0.5 * std::max(x, 1.0), reg_cap);
      x = std::min(cutoff, x + std::max(w, 1e-3));
      edges.push_back(x);
    }
    auto damped = [&](double t) {
      double damp = opts.kind == TailRegularization::gaussian
                        ? std::exp(-eps * t * t)
                        : std::exp(-eps * (t - lo));
      return psi(t) * damp;
    };
    auto r = integrate_oscillatory_fn(damped, edges, a, b, opts.osc);
    values.push_back(r.value);
    quad_noise = std::max(quad_noise, r.err);
  }
  // Neville extrapolation toward epsilon = 0
  const int n = static_cast<int>(values.size());
  std::vector<cplx> t(values);
  std::vector<double> eps(opts.epsilon_schedule.begin(), opts.epsilon_schedule.end());
  cplx corner = t[0];
  double last_step = std::numeric_limits<double>::max();
  double scale = 0.0;
  for (const auto& v : values) scale = std::max(scale, std::abs(v));
  for (int level = 1; level < n; ++level) {
    for (int i = 0; i + level < n; ++i)
      t[i] = t[i + 1] + (t[i + 1] - t[i]) * (eps[i + level] / (eps[i] - eps[i + level]));
    double step = std::abs(t[0] - corner);
    // growing corner corrections above the quadrature noise floor mean the
    // epsilon sequence is not converging
    double floor = 1e-8 + 1e-7 * scale + 30.0 * quad_noise;
    if (level >= 3 && step > 4.0 * last_step && step > floor)
      throw extrapolation_error("tail: epsilon extrapolation not settling");
    last_step = std::max(step, 1e-16);
    corner = t[0];
  }
  double raw_spread = std::abs(values[0] - corner);
  return {corner, std::max(last_step, 1e-4 * raw_spread)};
}

}  // namespace akprop
