#include "akprop/analysis.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include "akprop/spectral.hpp"

namespace akprop {

void parallel_for(int n, const std::function<void(int)>& body) {
  int threads = 1;
  if (const char* env = std::getenv("AKPROP_THREADS")) {
    threads = std::max(1, std::atoi(env));
  }
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

SupNormResult sup_kernel_norm(KernelEvaluator& eval, double t,
                              std::span<const Eigen::VectorXd> xs,
                              std::span<const Eigen::VectorXd> ys,
                              bool include_free) {
  SupNormResult out;
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = 0; j < ys.size(); ++j) {
      KernelSample s = eval(t, xs[i], ys[j]);
      double v = include_free ? std::abs(s.free_value + s.diff_value)
                              : std::abs(s.diff_value);
      if (v > out.value) {
        out.value = v;
        out.arg_x = xs[i];
        out.arg_y = ys[j];
        out.at_boundary = i == 0 || i + 1 == xs.size() || j == 0 || j + 1 == ys.size();
      }
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> line_grid(int d, double extent, int count,
                                       double offset) {
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    x[0] = offset - extent + 2.0 * extent * i / (count - 1);
    pts.push_back(x);
  }
  return pts;
}

DecayFitReport fit_decay_exponent(std::span<const double> times,
                                  std::span<const double> norms, double target,
                                  double tolerance) {
  if (times.size() < 5 || times.size() != norms.size())
    throw std::domain_error("fit_decay_exponent: need at least 5 ladder points");
  DecayFitReport rep;
  rep.times.assign(times.begin(), times.end());
  rep.sup_norms.assign(norms.begin(), norms.end());
  rep.target = target;
  rep.tolerance = tolerance;
  const int n = static_cast<int>(times.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    if (!(times[i] > 0.0) || !(norms[i] > 0.0))
      throw std::domain_error("fit_decay_exponent: nonpositive ladder data");
    double lx = std::log(times[i]), ly = std::log(norms[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double denom = n * sxx - sx * sx;
  rep.slope = (n * sxy - sx * sy) / denom;
  rep.intercept = (sy - rep.slope * sx) / n;
  double ss_res = 0.0, ss_y = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = std::log(norms[i]) - (rep.intercept + rep.slope * std::log(times[i]));
    ss_res += r * r;
    ss_y += std::pow(std::log(norms[i]) - sy / n, 2);
  }
  rep.stderr_slope = std::sqrt(ss_res / std::max(1, n - 2) / (sxx - sx * sx / n));
  rep.rel_residual = ss_y > 0.0 ? std::sqrt(ss_res / ss_y) : 0.0;
  rep.pass = std::abs(rep.slope - target) <= tolerance;
  return rep;
}

namespace {

double loglog_exponent(std::span<const double> x, std::span<const double> y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ScalingReport n_scaling_experiment(
    const std::function<ProfileFamily(int)>& generator, std::span<const int> n_list,
    double t_ref, std::span<const Eigen::VectorXd> xs,
    std::span<const Eigen::VectorXd> ys, double max_exponent,
    const QuadratureConfig& cfg) {
  ScalingReport rep;
  for (int n : n_list) {
    ProfileFamily fam = generator(n);
    KernelEvaluator eval(fam, cfg);
    double sup = sup_kernel_norm(eval, t_ref, xs, ys).value;
    rep.parameter.push_back(n);
    rep.constants.push_back(sup * std::pow(t_ref, 0.5 * fam.dim()));
  }
  rep.exponent = loglog_exponent(rep.parameter, rep.constants);
  rep.pass = rep.exponent <= max_exponent;
  return rep;
}

ScalingReport tau_scaling_experiment(const Profile& phi,
                                     std::span<const double> tau0_list, double lambda,
                                     double max_exponent, const QuadOptions& opts) {
  auto probe = cross_term_decay_probe(phi, tau0_list, lambda, phi.d, opts);
  ScalingReport rep;
  rep.parameter = probe.tau0;
  rep.constants = probe.f12_abs;
  rep.exponent = probe.slope;
  rep.pass = rep.exponent <= max_exponent;
  return rep;
}

ScalingReport alpha_scaling_experiment(const Profile& phi,
                                       std::span<const double> alpha_list, double t,
                                       std::span<const Eigen::VectorXd> xs,
                                       std::span<const Eigen::VectorXd> ys,
                                       double rel_window,
                                       const QuadratureConfig& cfg) {
  ScalingReport rep;
  for (double alpha : alpha_list) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::domain_error("alpha_scaling_experiment: alpha must lie in (0, 1)");
    ProfileFamily fam;
    fam.members = {phi};
    fam.weights = Eigen::VectorXd::Constant(1, alpha);
    KernelEvaluator eval(fam, cfg);
    double sup = sup_kernel_norm(eval, t, xs, ys).value;
    rep.parameter.push_back(alpha);
    rep.constants.push_back(sup / alpha);
  }
  double lo = rep.constants[0], hi = rep.constants[0];
  for (double c : rep.constants) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  rep.exponent = loglog_exponent(rep.parameter, rep.constants);
  rep.pass = hi <= (1.0 + rel_window) * lo;
  return rep;
}

}  // namespace akprop
