#include "akprop/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace akprop {
namespace {

constexpr double kPi = 3.14159265358979323846;

// first row of the 1-D spectral Laplacian (symmetric circulant)
Eigen::VectorXd laplacian_row(const GridSpec& g) {
  const int n = g.n;
  Eigen::VectorXd row(n);
  for (int p = 0; p < n; ++p) {
    double acc = 0.0;
    for (int m = -n / 2; m < n / 2; ++m) {
      double k = kPi * m / g.L;
      acc += k * k * std::cos(k * p * g.h());
    }
    row[p] = acc / n;
  }
  return row;
}

}  // namespace

void GridSpec::validate() const {
  if (n < 64 || (n & (n - 1)) != 0)
    throw std::domain_error("GridSpec: n must be a power of two, n >= 64");
  if (!(L > 0.0)) throw std::domain_error("GridSpec: L must be positive");
}

Eigen::VectorXd GridOperator::point(int idx) const {
  Eigen::VectorXd x(d);
  if (d == 1) {
    x[0] = -spec.L + idx * spec.h();
  } else {
    x[0] = -spec.L + (idx / spec.n) * spec.h();
    x[1] = -spec.L + (idx % spec.n) * spec.h();
  }
  return x;
}

int GridOperator::index_of(const Eigen::VectorXd& x) const {
  auto clampi = [&](double v) {
    int i = static_cast<int>(std::llround((v + spec.L) / spec.h()));
    return std::clamp(i, 0, spec.n - 1);
  };
  if (d == 1) return clampi(x[0]);
  return clampi(x[0]) * spec.n + clampi(x[1]);
}

GridOperator discretize_hamiltonian(const ProfileFamily& f, const GridSpec& g,
                                    int d) {
  g.validate();
  if (d == 0) d = f.size() ? f.dim() : 1;
  if (d != 1 && d != 2)
    throw std::domain_error("discretize_hamiltonian: grid oracle covers d = 1, 2");
  if (f.size() && f.dim() != d)
    throw std::domain_error("discretize_hamiltonian: dimension mismatch");
  GridOperator op;
  op.spec = g;
  op.d = d;
  op.real_valued = f.all_real();
  const int n = op.npoints();
  if (d == 2 && g.n > 64)
    throw std::domain_error("discretize_hamiltonian: d = 2 limited to n <= 64");

  // boundary tail check
  op.k_effective = 1.0;
  for (const auto& m : f.members) {
    Eigen::VectorXd corner = Eigen::VectorXd::Constant(d, -g.L);
    if (std::abs(m.eval(corner)) > 1e-10)
      throw std::domain_error("discretize_hamiltonian: box too small for profile tail");
    double reach = m.position_tail_radius(1e-10) + m.tau.lpNorm<Eigen::Infinity>();
    if (reach > g.L)
      throw std::domain_error("discretize_hamiltonian: box too small for profile tail");
    op.k_effective =
        std::max(op.k_effective, m.fourier_tail_radius(1e-10) + m.modk.norm());
  }

  Eigen::VectorXd row = laplacian_row(g);
  const double h_weight = std::pow(g.h(), d);
  if (op.real_valued) {
    Eigen::MatrixXd H(n, n);
    if (d == 1) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H(i, j) = row[std::abs(i - j) % g.n];
    } else {
      H.setZero();
      for (int i = 0; i < n; ++i) {
        int ix = i / g.n, iy = i % g.n;
        for (int jx = 0; jx < g.n; ++jx)
          H(i, jx * g.n + iy) += row[std::abs(ix - jx) % g.n];
        for (int jy = 0; jy < g.n; ++jy)
          H(i, ix * g.n + jy) += row[std::abs(iy - jy) % g.n];
      }
    }
    for (int m = 0; m < f.size(); ++m) {
      Eigen::VectorXd phi(n);
      for (int i = 0; i < n; ++i) phi[i] = f.members[m].eval(op.point(i)).real();
      H.noalias() += (f.weights[m] * h_weight) * phi * phi.transpose();
    }
    op.hermiticity_defect = (H - H.transpose()).cwiseAbs().maxCoeff();
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    op.eigenvalues = es.eigenvalues();
    op.evecs_real = es.eigenvectors();
  } else {
    Eigen::MatrixXcd H(n, n);
    if (d == 1) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) H(i, j) = row[std::abs(i - j) % g.n];
    } else {
      H.setZero();
      for (int i = 0; i < n; ++i) {
        int ix = i / g.n, iy = i % g.n;
        for (int jx = 0; jx < g.n; ++jx)
          H(i, jx * g.n + iy) += row[std::abs(ix - jx) % g.n];
        for (int jy = 0; jy < g.n; ++jy)
          H(i, ix * g.n + jy) += row[std::abs(iy - jy) % g.n];
      }
    }
    for (int m = 0; m < f.size(); ++m) {
      Eigen::VectorXcd phi(n);
      for (int i = 0; i < n; ++i) phi[i] = f.members[m].eval(op.point(i));
      H.noalias() += (f.weights[m] * h_weight) * phi * phi.adjoint();
    }
    op.hermiticity_defect = (H - H.adjoint()).cwiseAbs().maxCoeff();
    H = 0.5 * (H + H.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    op.eigenvalues = es.eigenvalues();
    op.evecs_cplx = es.eigenvectors();
  }
  op.min_eigenvalue = op.eigenvalues.minCoeff();
  return op;
}

namespace {

void check_budget(const GridOperator& op, double t, const Eigen::VectorXd& y) {
  double reach = y.lpNorm<Eigen::Infinity>() +
                 4.0 * std::sqrt(std::abs(t)) * op.k_effective;
  if (reach > op.spec.L)
    throw std::domain_error("grid_propagator: anti-wraparound budget exceeded (t = " +
                            std::to_string(t) + ")");
}

}  // namespace

Eigen::VectorXcd grid_propagator(const GridOperator& op, double t, int y_index) {
  check_budget(op, t, op.point(y_index));
  const int n = op.npoints();
  const double inv_h = 1.0 / std::pow(op.spec.h(), op.d);
  Eigen::VectorXcd phases(n);
  for (int m = 0; m < n; ++m)
    phases[m] = expi(-t * op.eigenvalues[m]);
  if (op.real_valued) {
    Eigen::VectorXcd coeff = op.evecs_real.row(y_index).transpose().cast<cplx>();
    return op.evecs_real.cast<cplx>() * (phases.array() * coeff.array()).matrix() *
           inv_h;
  }
  Eigen::VectorXcd coeff = op.evecs_cplx.row(y_index).adjoint();
  return op.evecs_cplx * (phases.array() * coeff.array()).matrix() * inv_h;
}

Eigen::VectorXcd grid_free_propagator(const GridOperator& op, double t, int y_index) {
  const GridSpec& g = op.spec;
  const int n = op.npoints();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  const double inv_h = 1.0 / std::pow(g.h(), op.d);
  if (op.d == 1) {
    for (int i = 0; i < n; ++i) {
      cplx acc = 0.0;
      double dx = (i - y_index) * g.h();
      for (int m = -g.n / 2; m < g.n / 2; ++m) {
        double k = kPi * m / g.L;
        acc += expi(-t * k * k + k * dx);
      }
      out[i] = acc / double(g.n) * inv_h;
    }
    return out;
  }
  // d = 2: product of two 1-D factors, indexed by signed node offset
  Eigen::VectorXcd axis(2 * g.n - 1);
  int yx = y_index / g.n, yy = y_index % g.n;
  for (int i = -(g.n - 1); i < g.n; ++i) {
    cplx acc = 0.0;
    for (int m = -g.n / 2; m < g.n / 2; ++m) {
      double k = kPi * m / g.L;
      acc += expi(-t * k * k + k * (i * g.h()));
    }
    axis[i + g.n - 1] = acc / double(g.n);
  }
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      out[ix * g.n + iy] =
          axis[ix - yx + g.n - 1] * axis[iy - yy + g.n - 1] * inv_h;
  return out;
}

cplx oracle_difference_kernel(const GridOperator& op, double t,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  check_budget(op, t, y);
  check_budget(op, t, x);
  const GridSpec& g = op.spec;
  auto column_diff = [&](int yi) {
    Eigen::VectorXcd u = grid_propagator(op, t, yi);
    Eigen::VectorXcd u0 = grid_free_propagator(op, t, yi);
    return (u - u0).eval();
  };
  auto value_at = [&](const Eigen::VectorXcd& col, const Eigen::VectorXd& pt) -> cplx {
    if (op.d == 2) return col[op.index_of(pt)];
    double s = (pt[0] + g.L) / g.h();
    int i0 = std::clamp(static_cast<int>(std::floor(s)), 0, g.n - 2);
    double w = s - i0;
    return (1.0 - w) * col[i0] + w * col[i0 + 1];
  };
  if (op.d == 2) return value_at(column_diff(op.index_of(y)), x);
  double s = (y[0] + g.L) / g.h();
  int j0 = std::clamp(static_cast<int>(std::floor(s)), 0, g.n - 2);
  double w = s - j0;
  cplx v0 = value_at(column_diff(j0), x);
  if (w < 1e-12) return v0;
  cplx v1 = value_at(column_diff(j0 + 1), x);
  return (1.0 - w) * v0 + w * v1;
}

}  // namespace akprop
