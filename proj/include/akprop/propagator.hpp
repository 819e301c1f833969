#pragma once

#include <map>
#include <memory>

#include "akprop/kernels.hpp"
#include "akprop/oscint.hpp"
#include "akprop/spectral.hpp"

namespace akprop {

struct QuadratureConfig {
  double lambda0 = 0.5;     // end of the geometrically refined low-energy panels
  double lambda_max = 30.0; // start of the regularized tail
  double phase_budget = M_PI / 2;
  double tol = 1e-9;
  std::vector<double> epsilon_schedule = {0.04, 0.02, 0.01, 0.005, 0.0025};
  int degree = 12;          // interpolation degree per panel
  bool cross_check = false; // re-run with doubled lambda_max / halved budget

  void validate() const;
};

struct KernelSample {
  double t = 0.0;
  Eigen::VectorXd x, y;
  cplx diff_value{};
  cplx free_value{};
  double err_est = 0.0;
};

/// (lambda * R_0^pm(lambda^2) phi)(x): the scaled convolved profile, finite at
/// lambda = 0.  Dispatches to the 1-D direct rule, the radial reductions for
/// d = 2, 3, or a spherical-shell fallback.
cplx scaled_convolved_profile(const Profile& phi, Branch branch, double lambda,
                              const Eigen::VectorXd& x,
                              const QuadOptions& opts = {});

/// h^pm(lambda, x) = (R_0^pm(lambda^2) phi)(x); requires lambda > 0.
cplx convolved_profile(const Profile& phi, Branch branch, double lambda,
                       const Eigen::VectorXd& x, const QuadOptions& opts = {});

/// Same quantity through the Fourier side (principal value against the
/// radial spectral density).  Far cheaper at large lambda, where the
/// position-space integral oscillates over the whole profile support.
cplx scaled_convolved_profile_fourier(const Profile& phi, Branch branch,
                                      double lambda, const Eigen::VectorXd& x,
                                      const QuadOptions& opts = {});

struct OscLambdaResult {
  cplx value{};
  double err_est = 0.0;
};

/// int_lo^hi e^{i(-t lambda^2 + c lambda)} psi(lambda) dlambda through the
/// shared panel engine; hi may be infinite, in which case the tail beyond
/// cfg.lambda_max is evaluated under the epsilon-regularized schedule.
OscLambdaResult oscillatory_lambda_quadrature(const Integrand& psi, double t,
                                              double c, double lo, double hi,
                                              const QuadratureConfig& cfg);

/// Caches Borel matrices and convolved profiles on the quadrature node grid
/// of one family, then synthesizes difference-kernel samples for arbitrary
/// (t, x, y).  Construction verifies a positive spectral margin on a coarse
/// lambda scan and refuses otherwise.
class KernelEvaluator {
 public:
  KernelEvaluator(ProfileFamily family, QuadratureConfig cfg);
  ~KernelEvaluator();
  KernelEvaluator(KernelEvaluator&&) noexcept;

  KernelSample operator()(double t, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y);

  const ProfileFamily& family() const;
  const QuadratureConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

KernelSample rank_one_difference_kernel(const Profile& phi, double alpha, double t,
                                        const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& y,
                                        const QuadratureConfig& cfg = {});

KernelSample finite_rank_difference_kernel(const ProfileFamily& f, double t,
                                           const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& y,
                                           const QuadratureConfig& cfg = {});

struct TraceKernelResult {
  KernelSample sample;
  double tail_bound = 0.0;
};

/// Sum of rank-one kernels over the first j_max members of a Fourier-disjoint
/// geometric-weight family, with the calibrated remainder majorant for the
/// dropped members.
TraceKernelResult trace_class_difference_kernel(const ProfileFamily& f, double t,
                                                const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& y, int j_max,
                                                const QuadratureConfig& cfg = {});

/// All partial sums S_1 ... S_{j_max} in one pass (one evaluator per member).
std::vector<TraceKernelResult> trace_class_partial_sums(
    const ProfileFamily& f, double t, const Eigen::VectorXd& x,
    const Eigen::VectorXd& y, int j_max, const QuadratureConfig& cfg = {});

cplx full_propagator_kernel(KernelEvaluator& eval, double t,
                            const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace akprop
