#include "akprop/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace akprop {
namespace {

constexpr double kPi = 3.14159265358979323846;

bool pair_fourier_disjoint(const Profile& pi, const Profile& pj) {
  if (!pi.fourier_radius || !pj.fourier_radius) return false;
  return (pi.modk - pj.modk).norm() >= *pi.fourier_radius + *pj.fourier_radius;
}

bool pair_plain_radial(const Profile& pi, const Profile& pj) {
  return pi.is_plain_radial() && pj.is_plain_radial();
}

// angular integral of phihat_j(rho w) conj(phihat_i(rho w)) over S^{d-1}
cplx sphere_pair_integral(const Profile& pi, const Profile& pj, double rho) {
  const int d = pi.d;
  if (d == 1) {
    Eigen::VectorXd p(1), m(1);
    p << rho;
    m << -rho;
    return pj.fourier(p) * std::conj(pi.fourier(p)) +
           pj.fourier(m) * std::conj(pi.fourier(m));
  }
  if (d == 2) {
    auto ring = [&](int n) {
      cplx acc = 0.0;
      Eigen::VectorXd w(2);
      for (int k = 0; k < n; ++k) {
        double th = 2.0 * kPi * k / n;
        w << rho * std::cos(th), rho * std::sin(th);
        acc += pj.fourier(w) * std::conj(pi.fourier(w));
      }
      return acc * (2.0 * kPi / n);
    };
    cplx prev = ring(32);
    for (int n = 64; n <= 16384; n *= 2) {
      cplx cur = ring(n);
      if (std::abs(cur - prev) <= 1e-13 * (1.0 + std::abs(cur))) return cur;
      prev = cur;
    }
    throw quadrature_error("sphere_pair_integral: circle quadrature stalled");
  }
  // d == 3: Gauss-Legendre in cos(theta) x trapezoid in azimuth
  auto shell = [&](int nu) {
    const auto& xs = gauss_legendre_nodes(nu);
    const auto& ws = gauss_legendre_weights(nu);
    const int nphi = 2 * nu;
    cplx acc = 0.0;
    Eigen::VectorXd w(3);
    for (int a = 0; a < nu; ++a) {
      double u = xs[a];
      double s = std::sqrt(std::max(0.0, 1.0 - u * u));
      cplx ring = 0.0;
      for (int k = 0; k < nphi; ++k) {
        double ph = 2.0 * kPi * k / nphi;
        w << rho * s * std::cos(ph), rho * s * std::sin(ph), rho * u;
        ring += pj.fourier(w) * std::conj(pi.fourier(w));
      }
      acc += ws[a] * ring * (2.0 * kPi / nphi);
    }
    return acc;
  };
  cplx prev = shell(12);
  for (int nu = 24; nu <= 384; nu *= 2) {
    cplx cur = shell(nu);
    if (std::abs(cur - prev) <= 1e-12 * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  throw quadrature_error("sphere_pair_integral: spherical quadrature stalled");
}

struct PairDensity {
  Integrand g;  // g(rho) = rho^{d-1} * angular integral
  double rho_max = 0.0;
  bool zero = false;
};

PairDensity make_pair_density(const Profile& pi, const Profile& pj) {
  PairDensity pd;
  if (pair_fourier_disjoint(pi, pj)) {
    pd.zero = true;
    pd.g = [](double) { return cplx(0.0); };
    return pd;
  }
  const int d = pi.d;
  const double tail = std::max(pi.fourier_tail_radius(1e-16) + pi.modk.norm(),
                               pj.fourier_tail_radius(1e-16) + pj.modk.norm());
  pd.rho_max = tail;
  if (pair_plain_radial(pi, pj)) {
    const double dist = (pi.tau - pj.tau).norm();
    const cplx phase = std::conj(pi.phase) * pj.phase;
    const double area = std::pow(2.0 * kPi, 0.5 * d);
    const Profile* a = &pi;
    const Profile* b = &pj;
    pd.g = [=](double rho) -> cplx {
      double amp = a->radial_fourier(rho) * b->radial_fourier(rho);
      return phase * amp * std::pow(rho, d - 1) * area *
             bessel_j_over_znu(d - 2, rho * dist);
    };
    return pd;
  }
  const Profile* a = &pi;
  const Profile* b = &pj;
  pd.g = [a, b, d](double rho) -> cplx {
    if (rho == 0.0 && d > 1) return cplx(0.0);
    return std::pow(rho, d - 1) * sphere_pair_integral(*a, *b, rho);
  };
  return pd;
}

cplx scaled_from_density(const PairDensity& pd, double lambda, Branch branch,
                         const QuadOptions& opts) {
  if (pd.zero) return 0.0;
  const cplx delta_term = cplx(0.0, branch_sign(branch) * 0.5 * kPi) * pd.g(lambda);
  if (lambda == 0.0) return delta_term;
  cplx pv;
  if (lambda < pd.rho_max + 1.0) {
    const double rho_max = std::max(pd.rho_max, 2.0 * lambda + 2.0);
    // the PV value is scaled by lambda below; its absolute tolerance can be
    // relaxed accordingly (the subtracted integrand is rounding-noisy near
    // the pole when lambda is tiny)
    QuadOptions pv_opts = opts;
    pv_opts.abs_tol = std::min(1e-7, opts.abs_tol / std::min(1.0, lambda));
    pv = pv_integrate(pd.g, lambda, rho_max, pv_opts).value;
  } else {
    // pole sits beyond the spectral support; nothing to subtract
    auto plain = [&](double rho) { return pd.g(rho) / (rho * rho - lambda * lambda); };
    pv = integrate(plain, 0.0, pd.rho_max, opts).value;
  }
  return lambda * pv + delta_term;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
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

cplx borel_lambda_scaled(const Profile& phi_i, const Profile& phi_j, double lambda,
                         Branch branch, const QuadOptions& opts) {
  if (phi_i.d != phi_j.d) throw std::domain_error("borel_transform: mixed dimensions");
  PairDensity pd = make_pair_density(phi_i, phi_j);
  return scaled_from_density(pd, lambda, branch, opts);
}

BorelValue borel_transform(const Profile& phi_i, const Profile& phi_j, double lambda,
                           Branch branch, const QuadOptions& opts) {
  if (!(lambda > 0.0)) throw std::domain_error("borel_transform: lambda must be > 0");
  BorelValue out;
  out.lambda = lambda;
  out.branch = branch;
  out.method = BorelMethod::radial_pv;
  out.value = borel_lambda_scaled(phi_i, phi_j, lambda, branch, opts) / lambda;
  return out;
}

BorelValue borel_transform_position_space(const Profile& phi_i, const Profile& phi_j,
                                          double lambda, Branch branch,
                                          const QuadOptions& opts) {
  if (!(lambda > 0.0)) throw std::domain_error("borel_transform: lambda must be > 0");
  const int d = phi_i.d;
  const int s = branch_sign(branch);
  BorelValue out;
  out.lambda = lambda;
  out.branch = branch;
  out.method = BorelMethod::position_space;
  if (d == 1) {
    const double R = std::max(phi_i.position_tail_radius(1e-12) + phi_i.tau.norm(),
                              phi_j.position_tail_radius(1e-12) + phi_j.tau.norm());
    auto f = [&](std::span<const double> pt) -> cplx {
      Eigen::VectorXd xv(1), yv(1);
      xv << pt[0];
      yv << pt[1];
      cplx kern =
          cplx(0.0, s * 0.5 / lambda) * expi(s * lambda * std::abs(pt[0] - pt[1]));
      return kern * phi_j.eval(yv) * std::conj(phi_i.eval(xv));
    };
    QuadOptions o = opts;
    o.abs_tol = std::max(opts.abs_tol, 1e-10);
    o.rel_tol = 1e-9;
    out.value = integrate_box(f, 2, -R, R, o).value;
    return out;
  }
  if (d == 3 && pair_plain_radial(phi_i, phi_j) && phi_i.tau.norm() == 0.0 &&
      phi_j.tau.norm() == 0.0) {
    const double R = std::max(phi_i.position_tail_radius(1e-12),
                              phi_j.position_tail_radius(1e-12));
    // <R_0 phi_j, phi_i> = (2 pi / (i s lambda)) int int r q phi_j(q) phi_i(r)
    //                      (e^{i s lam (r+q)} - e^{i s lam |r-q|}) dr dq
    auto f = [&](std::span<const double> pt) -> cplx {
      double r = 0.5 * (pt[0] + R), q = 0.5 * (pt[1] + R);  // map to [0, R]
      cplx osc = expi(s * lambda * (r + q)) - expi(s * lambda * std::abs(r - q));
      return r * q * phi_j.radial_position(q) * phi_i.radial_position(r) * osc;
    };
    QuadOptions o = opts;
    o.abs_tol = std::max(opts.abs_tol, 1e-11);
    o.rel_tol = 1e-9;
    cplx raw = integrate_box(f, 2, -R, R, o).value * 0.25;  // jacobian of the map
    out.value = 2.0 * kPi / (cplx(0.0, static_cast<double>(s)) * lambda) * raw;
    return out;
  }
  throw std::domain_error(
      "borel_transform_position_space: available for d = 1 or plain radial d = 3");
}

Eigen::MatrixXcd scaled_borel_matrix(const ProfileFamily& f, double lambda,
                                     Branch branch, const QuadOptions& opts,
                                     bool use_disjoint_fast_path) {
  const int n = f.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  const bool diag_only = use_disjoint_fast_path && f.fourier_disjoint();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (diag_only && i != j) continue;
      if (j < i && f.members[i].is_real() && f.members[j].is_real()) {
        m(i, j) = m(j, i);  // complex symmetric for real profiles
        continue;
      }
      m(i, j) = borel_lambda_scaled(f.members[i], f.members[j], lambda, branch, opts);
    }
  }
  return m;
}

AKSystem borel_matrix(const ProfileFamily& f, double lambda, Branch branch,
                      const QuadOptions& opts, bool use_disjoint_fast_path) {
  if (!(lambda > 0.0)) throw std::domain_error("borel_matrix: lambda must be > 0");
  const int n = f.size();
  AKSystem sys;
  sys.lambda = lambda;
  sys.branch = branch;
  sys.weights = f.weights;
  sys.F = scaled_borel_matrix(f, lambda, branch, opts, use_disjoint_fast_path) / lambda;
  sys.A = Eigen::MatrixXcd::Identity(n, n) +
          Eigen::MatrixXcd(f.weights.asDiagonal()) * sys.F;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys.A);
  sys.det_A = lu.determinant();
  sys.margin = std::abs(sys.det_A);
  double dom = std::numeric_limits<double>::max();
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += std::abs(sys.A(i, j));
    dom = std::min(dom, std::abs(sys.A(i, i)) - off);
  }
  sys.dominance_margin = n > 0 ? dom : 1.0;
  if (sys.margin < 1e-12) {
    int worst = 0;
    double best = std::numeric_limits<double>::max();
    for (int i = 0; i < n; ++i) {
      if (std::abs(sys.A(i, i)) < best) {
        best = std::abs(sys.A(i, i));
        worst = i;
      }
    }
    throw singular_system_error("A(lambda^2) singular at lambda = " +
                                std::to_string(lambda) + " (weak minor at index " +
                                std::to_string(worst) + ")");
  }
  sys.G = lu.solve(Eigen::MatrixXcd::Identity(n, n));
  return sys;
}

NeumannExpansion ak_inverse_neumann(const AKSystem& sys) {
  const int n = static_cast<int>(sys.F.rows());
  if (n < 1) throw std::domain_error("ak_inverse_neumann: empty system");
  for (int i = 1; i < n; ++i) {
    if (std::abs(sys.F(i, i) - sys.F(0, 0)) > 1e-8 * (1.0 + std::abs(sys.F(0, 0))))
      throw std::domain_error(
          "ak_inverse_neumann: diagonal entries differ (not a translated family)");
    if (std::abs(sys.weights[i] - sys.weights[0]) > 0.0)
      throw std::domain_error("ak_inverse_neumann: weights must be uniform");
  }
  const double alpha = sys.weights[0];
  NeumannExpansion ne;
  ne.g_phi = 1.0 / (1.0 + alpha * sys.F(0, 0));
  ne.F_tau0 = alpha * sys.F;
  for (int i = 0; i < n; ++i) ne.F_tau0(i, i) = 0.0;
  double row_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::abs(ne.F_tau0(i, j));
    row_sum = std::max(row_sum, s);
  }
  ne.radius_bound = std::abs(ne.g_phi) * row_sum;
  if (ne.radius_bound >= 1.0)
    throw divergence_error("ak_inverse_neumann: row-sum radius " +
                           std::to_string(ne.radius_bound) + " >= 1, expansion refused");
  Eigen::MatrixXcd term = ne.g_phi * Eigen::MatrixXcd::Identity(n, n);
  ne.inverse = term;
  ne.terms_used = 1;
  for (int k = 1; k < 5000; ++k) {
    term = term * (-ne.g_phi * ne.F_tau0);
    ne.inverse += term;
    ++ne.terms_used;
    if (term.cwiseAbs().maxCoeff() <= 1e-12) return ne;
  }
  throw divergence_error("ak_inverse_neumann: series failed to settle");
}

ScanReport spectral_condition_scan(const ProfileFamily& f,
                                   std::span<const double> lambda_grid,
                                   const QuadOptions& opts) {
  ScanReport rep;
  rep.c0_est = std::numeric_limits<double>::max();
  for (double lam : lambda_grid) {
    if (!(lam > 0.0))
      throw std::domain_error("spectral_condition_scan: grid must be positive");
    for (Branch br : {Branch::plus, Branch::minus}) {
      ScanRow row;
      row.lambda = lam;
      row.branch = br;
      if (f.size() == 0 || f.weights.cwiseAbs().maxCoeff() == 0.0) {
        row.margin = 1.0;
        row.dominance_margin = 1.0;
      } else {
        Eigen::MatrixXcd scaled = scaled_borel_matrix(f, lam, br, opts);
        const int n = f.size();
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n) +
                             Eigen::MatrixXcd(f.weights.asDiagonal()) * (scaled / lam);
        row.margin = std::abs(A.determinant());
        double dom = std::numeric_limits<double>::max();
        for (int i = 0; i < n; ++i) {
          double off = 0.0;
          for (int j = 0; j < n; ++j)
            if (j != i) off += std::abs(A(i, j));
          dom = std::min(dom, std::abs(A(i, i)) - off);
        }
        row.dominance_margin = dom;
      }
      rep.rows.push_back(row);
      if (row.margin < rep.c0_est) {
        rep.c0_est = row.margin;
        rep.argmin_lambda = lam;
      }
    }
  }
  return rep;
}

CrossTermReport cross_term_decay_probe(const Profile& phi,
                                       std::span<const double> tau0_list,
                                       double lambda, int d,
                                       const QuadOptions& opts) {
  if (phi.d != d) throw std::domain_error("cross_term_decay_probe: dimension mismatch");
  CrossTermReport rep;
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(d);
  e1[0] = 1.0;
  for (double t0 : tau0_list) {
    Profile shifted = translate(phi, t0 * e1);
    cplx f12 = borel_transform(phi, shifted, lambda, Branch::plus, opts).value;
    rep.tau0.push_back(t0);
    rep.f12_abs.push_back(std::abs(f12));
  }
  std::vector<double> positive_tau, positive_val;
  for (size_t i = 0; i < rep.tau0.size(); ++i) {
    if (rep.tau0[i] > 0.0 && rep.f12_abs[i] > 0.0) {
      positive_tau.push_back(rep.tau0[i]);
      positive_val.push_back(rep.f12_abs[i]);
    }
  }
  rep.slope = positive_tau.size() >= 2 ? loglog_slope(positive_tau, positive_val) : 0.0;
  return rep;
}

Eigen::VectorXcd resolvent_apply(const ProfileFamily& f, cplx z,
                                 const Eigen::VectorXcd& values, double L) {
  if (z.imag() == 0.0 && z.real() >= 0.0)
    throw std::domain_error("resolvent_apply: z must lie off [0, inf)");
  if (f.size() > 0 && f.dim() != 1)
    throw std::domain_error("resolvent_apply: grid application implemented for d = 1");
  const int n = static_cast<int>(values.size());
  const double h = 2.0 * L / n;
  cplx s = std::sqrt(z);
  if (s.imag() < 0.0) s = -s;
  auto x_at = [&](int i) { return -L + i * h; };
  auto kernel = [&](double dist) {
    return cplx(0.0, 0.5) / s * std::exp(cplx(0.0, 1.0) * s * dist);
  };
  auto apply_r0 = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out(n);
    for (int i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (int j = 0; j < n; ++j) acc += kernel(std::abs(x_at(i) - x_at(j))) * v[j];
      out[i] = acc * h;
    }
    return out;
  };
  Eigen::VectorXcd r0g = apply_r0(values);
  const int m = f.size();
  if (m == 0) return r0g;
  std::vector<Eigen::VectorXcd> phis(m), r0phis(m);
  for (int k = 0; k < m; ++k) {
    phis[k].resize(n);
    Eigen::VectorXd pt(1);
    for (int i = 0; i < n; ++i) {
      pt << x_at(i);
      phis[k][i] = f.members[k].eval(pt);
    }
    r0phis[k] = apply_r0(phis[k]);
  }
  Eigen::MatrixXcd F(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      F(i, j) = (phis[i].conjugate().array() * r0phis[j].array()).sum() * h;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(m, m) +
                       Eigen::MatrixXcd(f.weights.asDiagonal()) * F;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  if (std::abs(lu.determinant()) < 1e-12)
    throw singular_system_error("resolvent_apply: singular A(z)");
  Eigen::MatrixXcd C = lu.solve(Eigen::MatrixXcd(f.weights.asDiagonal()));
  Eigen::VectorXcd inner(m);
  for (int j = 0; j < m; ++j)
    inner[j] = (phis[j].conjugate().array() * r0g.array()).sum() * h;
  Eigen::VectorXcd out = r0g;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out -= C(i, j) * inner[j] * r0phis[i];
  return out;
}

Lambda0Selection select_lambda0(const ProfileFamily& f, const QuadOptions& opts) {
  Lambda0Selection sel;
  if (f.size() == 0) {
    sel.lambda0 = 0.5;
    sel.regime = "free";
    sel.regime_verified = true;
    return sel;
  }
  const Profile& phi = f.members.front();
  const int d = phi.d;
  const bool zero_mean = std::abs(phi.mean) < 1e-10;
  for (double lam0 = 0.5; lam0 > 1e-3; lam0 *= 0.5) {
    bool ok = true;
    double lo = std::numeric_limits<double>::max(), hi = 0.0;
    for (int i = 1; i <= 6; ++i) {
      double lam = lam0 * i / 6.0;
      cplx F = borel_transform(phi, phi, lam, Branch::plus, opts).value;
      double probe;
      if (d == 1 && !zero_mean) {
        probe = lam * std::abs(F.imag());
      } else if (d == 2 && !zero_mean) {
        probe = F.real() / std::log(2.0 / lam);
        if (probe <= 0.0) ok = false;
      } else {
        probe = F.real();
        if (probe <= 0.0) ok = false;
      }
      lo = std::min(lo, probe);
      hi = std::max(hi, probe);
    }
    if (ok && hi <= 4.0 * lo) {
      sel.lambda0 = lam0;
      sel.regime_verified = true;
      sel.regime = (d == 1 && !zero_mean)   ? "d1-nonzero-mean"
                   : (d == 2 && !zero_mean) ? "d2-nonzero-mean"
                                            : "positive-real-part";
      return sel;
    }
  }
  sel.lambda0 = 0.25;
  sel.regime = "unverified";
  sel.regime_verified = false;
  return sel;
}

}  // namespace akprop
