#pragma once

#include <functional>
#include <vector>

#include "akprop/propagator.hpp"

namespace akprop {

struct SupNormResult {
  double value = 0.0;
  bool at_boundary = false;  // maximum attained on the grid edge
  Eigen::VectorXd arg_x, arg_y;
};

/// max over the (x, y) grid of |diff kernel| (optionally of the full kernel).
SupNormResult sup_kernel_norm(KernelEvaluator& eval, double t,
                              std::span<const Eigen::VectorXd> xs,
                              std::span<const Eigen::VectorXd> ys,
                              bool include_free = false);

/// 1-D grid of points r*dir for r in [-extent, extent] with the given count.
std::vector<Eigen::VectorXd> line_grid(int d, double extent, int count,
                                       double offset = 0.0);

struct DecayFitReport {
  std::vector<double> times;
  std::vector<double> sup_norms;
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  double rel_residual = 0.0;  // RMS residual of the log-log fit
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

DecayFitReport fit_decay_exponent(std::span<const double> times,
                                  std::span<const double> norms, double target,
                                  double tolerance);

struct ScalingReport {
  std::vector<double> parameter;  // N, tau0 or alpha values
  std::vector<double> constants;  // fitted prefactors C_est per value
  double exponent = 0.0;
  bool pass = false;
};

/// C_est(N) = sup-norm * t_ref^{d/2} for families produced by the generator;
/// pass when the fitted N-growth exponent stays below max_exponent.
ScalingReport n_scaling_experiment(
    const std::function<ProfileFamily(int)>& generator, std::span<const int> n_list,
    double t_ref, std::span<const Eigen::VectorXd> xs,
    std::span<const Eigen::VectorXd> ys, double max_exponent,
    const QuadratureConfig& cfg = {});

/// Cross-term decay in the translation distance; pass when the fitted
/// exponent stays below max_exponent (a negative number).
ScalingReport tau_scaling_experiment(const Profile& phi,
                                     std::span<const double> tau0_list, double lambda,
                                     double max_exponent,
                                     const QuadOptions& opts = {});

/// sup-norm/alpha across a small-alpha ladder; pass when the ratios agree
/// within rel_window.
ScalingReport alpha_scaling_experiment(const Profile& phi,
                                       std::span<const double> alpha_list, double t,
                                       std::span<const Eigen::VectorXd> xs,
                                       std::span<const Eigen::VectorXd> ys,
                                       double rel_window,
                                       const QuadratureConfig& cfg = {});

/// Deterministic parallel map: results land by index; thread count from the
/// AKPROP_THREADS environment variable (default 1).
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace akprop
