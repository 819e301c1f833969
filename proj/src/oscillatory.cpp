#include "akprop/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "akprop/bump.hpp"

namespace akprop {
namespace {

// high-order central difference of the symbol, step adapted to lambda
double symbol_derivative(const std::function<double(double)>& f, double lam, int j,
                         double scale) {
  if (j == 0) return f(lam);
  const double h = std::max(1e-4, 0.02 * std::min(lam, scale));
  if (j == 1)
    return (-f(lam + 2 * h) + 8 * f(lam + h) - 8 * f(lam - h) + f(lam - 2 * h)) /
           (12.0 * h);
  if (j == 2)
    return (-f(lam + 2 * h) + 16 * f(lam + h) - 30 * f(lam) + 16 * f(lam - h) -
            f(lam - 2 * h)) /
           (12.0 * h * h);
  // higher orders: recurse on second differences
  auto g = [&](double u) { return symbol_derivative(f, u, j - 2, scale); };
  return (g(lam + h) - 2 * g(lam) + g(lam - h)) / (h * h);
}

std::vector<double> segment_edges(const SymbolSpec& psi, double hi) {
  std::vector<double> edges;
  if (!psi.high) {
    edges = {0.0, 0.25 * psi.r0, 0.5 * psi.r0, 0.75 * psi.r0, psi.r0};
  } else {
    double x = psi.r0;
    edges.push_back(x);
    while (x < hi) {
      x = std::min(hi, x + std::max(0.5, 0.35 * x));
      edges.push_back(x);
    }
  }
  return edges;
}

cplx lab_integral(double t, double x, const std::function<double(double)>& eval,
                  const SymbolSpec& psi, const LabOptions& opts,
                  std::span<const double> extra_edges = {}) {
  if (t == 0.0) throw std::domain_error("oscillatory_integral: t must be nonzero");
  auto f = [&](double lam) { return cplx(eval(lam)); };
  auto with_extras = [&](std::vector<double> edges) {
    for (double e : extra_edges)
      if (e > edges.front() && e < edges.back()) edges.push_back(e);
    std::sort(edges.begin(), edges.end());
    return edges;
  };
  if (!psi.high)
    return integrate_oscillatory_fn(f, with_extras(segment_edges(psi, psi.r0)), t, x,
                                    opts.osc)
        .value;
  const double main_hi = psi.r0 + opts.main_span;
  cplx main = integrate_oscillatory_fn(f, with_extras(segment_edges(psi, main_hi)), t,
                                       x, opts.osc)
                  .value;
  TailOptions topt;
  topt.osc = opts.osc;
  topt.kind = TailRegularization::exponential;
  for (double e : opts.epsilon_schedule)
    topt.epsilon_schedule.push_back(e / main_hi);
  auto tail = integrate_oscillatory_tail(f, main_hi, t, x, topt);
  return main + tail.value;
}

}  // namespace

SymbolSpec model_symbol(double b, int K, bool high, double r0) {
  if (!(b > -1.0 && b < 2.0 * K - 1.0))
    throw std::domain_error("model_symbol: need -1 < b < 2K - 1");
  if (!(r0 > 0.0)) throw std::domain_error("model_symbol: r0 must be positive");
  SymbolSpec s;
  s.b = b;
  s.K = K;
  s.high = high;
  s.r0 = r0;
  if (!high) {
    s.eval = [b, r0](double lam) {
      if (lam <= 0.0 || lam >= r0) return 0.0;
      return std::pow(lam, b) * plateau(lam, 0.5 * r0, r0);
    };
  } else {
    s.eval = [b, r0](double lam) {
      if (lam <= r0) return 0.0;
      return std::pow(lam, b) * (1.0 - plateau(lam, r0, 2.0 * r0));
    };
  }
  // sample the derivative constants over the active range
  s.deriv_constants.assign(K + 1, 0.0);
  std::vector<double> sweep;
  if (!high) {
    for (int i = 1; i < 60; ++i) sweep.push_back(r0 * i / 60.0);
  } else {
    for (double lam = 1.02 * r0; lam < 50.0 * r0; lam *= 1.15) sweep.push_back(lam);
  }
  for (int j = 0; j <= K; ++j) {
    double cj = 0.0;
    for (double lam : sweep) {
      double dj = std::abs(symbol_derivative(s.eval, lam, j, r0));
      cj = std::max(cj, dj * std::pow(lam, j - b));
    }
    s.deriv_constants[j] = 1.05 * cj;
  }
  return s;
}

OscillatoryResult oscillatory_integral(double t, double x, const SymbolSpec& psi,
                                       const LabOptions& opts) {
  OscillatoryResult out;
  out.value = lab_integral(t, x, psi.eval, psi, opts);
  const double at = std::abs(t);
  out.regime = std::abs(x) / std::sqrt(at) > 1.0 ? OscRegime::far : OscRegime::near;
  out.bound = out.regime == OscRegime::near
                  ? std::pow(at, -0.5 * (1.0 + psi.b))
                  : std::pow(at, -0.5 - psi.b) * std::pow(std::abs(x), psi.b);
  out.ratio = std::abs(out.value) / out.bound;
  return out;
}

SplitResult stationary_phase_split(double t, double x, const SymbolSpec& psi,
                                   const LabOptions& opts) {
  if (t == 0.0) throw std::domain_error("stationary_phase_split: t must be nonzero");
  SplitResult out;
  const double ratio = x / t;
  auto window = [ratio](double lam) {
    if (ratio == 0.0) return 0.0;  // the window |2 lam + x/t| < |x/t|/2 is empty
    return plateau((2.0 * lam + ratio) / (0.5 * std::abs(ratio)), 0.5, 1.0);
  };
  auto in_window = [&](double lam) { return window(lam) * psi.eval(lam); };
  auto outside = [&](double lam) { return (1.0 - window(lam)) * psi.eval(lam); };
  // the window can be narrow; its boundaries must appear among the panel edges
  std::vector<double> marks;
  if (ratio < 0.0) {
    double a = std::abs(ratio);
    marks = {0.25 * a, 0.375 * a, 0.5 * a, 0.625 * a, 0.75 * a};
  }
  out.i1 = lab_integral(t, x, in_window, psi, opts, marks);
  out.i2 = lab_integral(t, x, outside, psi, opts, marks);
  return out;
}

BoundSweepReport verify_bound_sweep(const std::string& bound_id,
                                    const SymbolSpec& psi,
                                    std::span<const double> t_list,
                                    std::span<const double> x_list, int d,
                                    const LabOptions& opts) {
  BoundSweepReport rep;
  rep.bound_id = bound_id;
  auto bound_for = [&](double t, double x) {
    const double at = std::abs(t);
    if (bound_id == "2.32") {
      return std::abs(x) / std::sqrt(at) > 1.0
                 ? std::pow(at, -0.5 - psi.b) * std::pow(std::abs(x), psi.b)
                 : std::pow(at, -0.5 * (1.0 + psi.b));
    }
    if (bound_id == "2.33")
      return std::pow(at, -0.5 * (1.0 + psi.b)) *
             std::pow(1.0 + std::abs(x), 0.5 * psi.b);
    if (bound_id == "2.34")
      return std::pow(at, -0.5 * d) * std::pow(1.0 + std::abs(x), 0.5 * (d - 1.0));
    throw std::domain_error("verify_bound_sweep: unknown bound id");
  };
  auto run = [&](std::span<const double> ts, std::span<const double> xs,
                 std::vector<SweepRow>* rows) {
    double worst = 0.0;
    for (double t : ts) {
      for (double x : xs) {
        auto r = oscillatory_integral(t, x, psi, opts);
        SweepRow row;
        row.t = t;
        row.x = x;
        row.regime = r.regime;
        row.abs_value = std::abs(r.value);
        row.bound = bound_for(t, x);
        row.ratio = row.abs_value / row.bound;
        worst = std::max(worst, row.ratio);
        if (rows) rows->push_back(row);
      }
    }
    return worst;
  };
  rep.max_ratio = run(t_list, x_list, &rep.rows);
  // doubled lattice: twice the density, t-range stretched by 2
  std::vector<double> t2, x2;
  for (size_t i = 0; i < t_list.size(); ++i) {
    t2.push_back(t_list[i]);
    if (i + 1 < t_list.size()) t2.push_back(0.5 * (t_list[i] + t_list[i + 1]));
  }
  t2.push_back(2.0 * t_list.back());
  for (size_t i = 0; i < x_list.size(); ++i) {
    x2.push_back(x_list[i]);
    if (i + 1 < x_list.size()) x2.push_back(0.5 * (x_list[i] + x_list[i + 1]));
  }
  rep.doubled_max_ratio = run(t2, x2, nullptr);
  rep.pass = rep.doubled_max_ratio <= 1.10 * rep.max_ratio + 1e-12;
  return rep;
}

}  // namespace akprop
