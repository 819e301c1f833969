#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "akprop/profiles.hpp"

namespace akprop {

class singular_system_error : public std::runtime_error {
 public:
  explicit singular_system_error(const std::string& what) : std::runtime_error(what) {}
};

class divergence_error : public std::runtime_error {
 public:
  explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

enum class BorelMethod { radial_pv, position_space };

struct BorelValue {
  double lambda = 0.0;
  Branch branch = Branch::plus;
  cplx value{};
  BorelMethod method = BorelMethod::radial_pv;
};

/// lambda * <R_0^pm(lambda^2) phi_j, phi_i>, evaluated through the radial
/// route lambda*PV + (+-) i pi g(lambda)/2.  Finite down to lambda = 0, which
/// is where the unscaled transform develops its d = 1 singularity.
cplx borel_lambda_scaled(const Profile& phi_i, const Profile& phi_j, double lambda,
                         Branch branch, const QuadOptions& opts = {});

BorelValue borel_transform(const Profile& phi_i, const Profile& phi_j, double lambda,
                           Branch branch, const QuadOptions& opts = {});

/// Independent oracle: position-space double quadrature.  d = 1 for general
/// profiles; d = 3 for plain radial ones (reduced to a 2-D radial integral).
BorelValue borel_transform_position_space(const Profile& phi_i, const Profile& phi_j,
                                          double lambda, Branch branch,
                                          const QuadOptions& opts = {});

/// Matrix of lambda * f_ij, the stable building block shared with the
/// propagator synthesis.  Off-diagonal entries are exact zeros when the
/// family certifies Fourier-disjointness and use_disjoint_fast_path is set.
Eigen::MatrixXcd scaled_borel_matrix(const ProfileFamily& f, double lambda,
                                     Branch branch, const QuadOptions& opts = {},
                                     bool use_disjoint_fast_path = true);

/// The boundary-value system A = I + diag(w) F with its inverse and margins.
struct AKSystem {
  double lambda = 0.0;
  Branch branch = Branch::plus;
  Eigen::VectorXd weights;
  Eigen::MatrixXcd F;  // raw Borel matrix f_ij
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd G;  // A^{-1}
  cplx det_A{};
  double margin = 0.0;            // |det A|
  double dominance_margin = 0.0;  // min_i (|A_ii| - sum_{j != i} |A_ij|)
};

AKSystem borel_matrix(const ProfileFamily& f, double lambda, Branch branch,
                      const QuadOptions& opts = {},
                      bool use_disjoint_fast_path = true);

struct NeumannExpansion {
  cplx g_phi{};
  Eigen::MatrixXcd F_tau0;  // weighted off-diagonal part, zero diagonal
  int terms_used = 0;
  double radius_bound = 0.0;
  Eigen::MatrixXcd inverse;  // partial-sum approximation of G
};

/// Series inverse for translated families (equal diagonal, equal weights).
/// Refuses with divergence_error when the row-sum radius reaches 1.
NeumannExpansion ak_inverse_neumann(const AKSystem& sys);

struct ScanRow {
  double lambda = 0.0;
  Branch branch = Branch::plus;
  double margin = 0.0;
  double dominance_margin = 0.0;
};

struct ScanReport {
  double c0_est = 0.0;
  double argmin_lambda = 0.0;
  std::vector<ScanRow> rows;
};

ScanReport spectral_condition_scan(const ProfileFamily& f,
                                   std::span<const double> lambda_grid,
                                   const QuadOptions& opts = {});

struct CrossTermReport {
  std::vector<double> tau0;
  std::vector<double> f12_abs;
  double slope = 0.0;  // log-log regression slope
};

CrossTermReport cross_term_decay_probe(const Profile& phi,
                                       std::span<const double> tau0_list,
                                       double lambda, int d,
                                       const QuadOptions& opts = {});

/// Applies R(z) = R_0(z) - sum_ij c_ij R_0 phi_i <R_0 ., phi_j> on a uniform
/// 1-D grid over [-L, L); z off the nonnegative real axis.
Eigen::VectorXcd resolvent_apply(const ProfileFamily& f, cplx z,
                                 const Eigen::VectorXcd& values, double L);

struct Lambda0Selection {
  double lambda0 = 0.5;
  bool regime_verified = false;
  std::string regime;
};

/// Scans downward from 1/2 until the low-energy regime of the family's first
/// profile is visible on a sample grid; the choice feeds the cutoff split.
Lambda0Selection select_lambda0(const ProfileFamily& f, const QuadOptions& opts = {});

}  // namespace akprop
