#pragma once

#include <Eigen/Core>

#include "akprop/profiles.hpp"

namespace akprop {

struct GridSpec {
  double L = 64.0;  // box half-width
  int n = 2048;     // points per axis (power of two)

  double h() const { return 2.0 * L / n; }
  void validate() const;
};

/// Dense self-adjoint discretization of H = -Laplacian + sum w_j P_j on a
/// periodic box: spectral Laplacian (exact plane-wave phases) plus projection
/// terms from grid samples of the profiles.  The eigendecomposition is
/// computed once at construction and reused by every propagator call.
class GridOperator {
 public:
  GridSpec spec;
  int d = 1;
  bool real_valued = true;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  double k_effective = 0.0;  // largest frequency carrying profile amplitude

  int npoints() const { return d == 1 ? spec.n : spec.n * spec.n; }
  Eigen::VectorXd point(int idx) const;
  int index_of(const Eigen::VectorXd& x) const;  // nearest node

  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd evecs_real;
  Eigen::MatrixXcd evecs_cplx;
};

/// Realizes the Hamiltonian on the grid; throws when a profile's decay tail
/// is not below 1e-10 at the box boundary.
GridOperator discretize_hamiltonian(const ProfileFamily& f, const GridSpec& g,
                                    int d = 0);

/// Column of e^{-itH} applied to delta_y / h; throws when the anti-wraparound
/// budget |y| + 4 sqrt(t) k_eff > L is violated.
Eigen::VectorXcd grid_propagator(const GridOperator& op, double t, int y_index);

/// Column of the free propagator on the same box (exact spectral form).
Eigen::VectorXcd grid_free_propagator(const GridOperator& op, double t, int y_index);

/// (e^{-itH} - e^{-itH0})(x, y) with linear interpolation to off-node points
/// (d = 1; d = 2 uses the nearest node).
cplx oracle_difference_kernel(const GridOperator& op, double t,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace akprop
