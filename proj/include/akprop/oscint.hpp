#pragma once

#include <functional>
#include <vector>

#include "akprop/quadrature.hpp"
#include "akprop/special.hpp"

namespace akprop {

class extrapolation_error : public std::runtime_error {
 public:
  explicit extrapolation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Piecewise Chebyshev interpolant of a smooth (possibly mildly oscillatory)
/// amplitude on a panel decomposition of [a, b].
class PanelInterpolant {
 public:
  struct Panel {
    double lo = 0.0, hi = 0.0;
    std::vector<cplx> values;  // at Chebyshev-Lobatto nodes, descending in x
    std::vector<cplx> coeffs;  // Chebyshev coefficients
  };

  static PanelInterpolant build(const Integrand& f, std::span<const double> edges,
                                int degree, double tol, int max_splits = 400);

  cplx eval(double x) const;
  double lo() const { return panels_.front().lo; }
  double hi() const { return panels_.back().hi; }
  const std::vector<Panel>& panels() const { return panels_; }

 private:
  std::vector<Panel> panels_;
};

struct OscQuadOptions {
  double phase_budget = M_PI / 2;  // max phase change per direct subpanel
  double levin_threshold = 6.0;    // total panel phase above which Levin engages
  int levin_order = 16;
  double stationary_margin = 1.0;  // panel widths kept away from the stationary point
};

struct OscQuadResult {
  cplx value{};
  double err = 0.0;
};

/// int e^{i(a x^2 + b x)} psi(x) dx over the interpolant's span, combining
/// direct phase-budget Gauss-Legendre panels near the stationary point
/// x* = -b/(2a) with Levin collocation away from it.
OscQuadResult integrate_oscillatory(const PanelInterpolant& psi, double a, double b,
                                    const OscQuadOptions& opts = {});

/// Same contract but with a raw integrand sampled on the fly (used for
/// regularized tails where the amplitude carries an externally applied decay
/// factor).
OscQuadResult integrate_oscillatory_fn(const Integrand& psi,
                                       std::span<const double> edges, double a,
                                       double b, const OscQuadOptions& opts = {});

enum class TailRegularization { gaussian, exponential };

struct TailOptions {
  OscQuadOptions osc;
  std::vector<double> epsilon_schedule;  // strictly decreasing
  TailRegularization kind = TailRegularization::gaussian;
  double amplitude_floor = 1e-18;  // truncate once the damped amplitude is below
};

/// Regularized tail int_{lo}^{inf} e^{i(a x^2 + b x)} psi(x) dx: evaluates the
/// damped integral over the epsilon schedule and extrapolates to zero by a
/// Neville table, with a monotonicity check on the extrapolation column.
OscQuadResult integrate_oscillatory_tail(const Integrand& psi, double lo, double a,
                                         double b, const TailOptions& opts);

}  // namespace akprop
