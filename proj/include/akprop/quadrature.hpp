#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace akprop {

class quadrature_error : public std::runtime_error {
 public:
  explicit quadrature_error(const std::string& what) : std::runtime_error(what) {}
};

struct QuadResult {
  std::complex<double> value;
  double err = 0.0;
  long long nevals = 0;
};

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;
  int max_intervals = 4000;
  bool throw_on_failure = true;
};

using Integrand = std::function<std::complex<double>(double)>;

/// Adaptive Gauss-Kronrod (G7, K15) on [a, b].
QuadResult integrate(const Integrand& f, double a, double b,
                     const QuadOptions& opts = {});

/// Adaptive integration with prescribed initial breakpoints (sorted).
QuadResult integrate_segments(const Integrand& f, std::span<const double> pts,
                              const QuadOptions& opts = {});

/// P.V. int_0^rho_max g(rho)/(rho^2 - lambda^2) drho by subtracting
/// g(lambda) on a symmetric window around the pole (the remaining log term
/// has a closed form).  Requires 0 < lambda < rho_max.
QuadResult pv_integrate(const Integrand& g, double lambda, double rho_max,
                        const QuadOptions& opts = {});

/// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1] (cached).
const std::vector<double>& gauss_legendre_nodes(int n);
const std::vector<double>& gauss_legendre_weights(int n);

/// Fixed n-point Gauss-Legendre approximation on [a, b].
std::complex<double> gauss_legendre(const Integrand& f, double a, double b, int n);

/// Adaptive tensor-product integration over the box [lo, hi]^dim via nested
/// 1-D adaptive rules.  Tolerances are per-axis.
QuadResult integrate_box(
    const std::function<std::complex<double>(std::span<const double>)>& f,
    int dim, double lo, double hi, const QuadOptions& opts = {});

}  // namespace akprop
