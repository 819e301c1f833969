#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>
#include <vector>

#include "akprop/quadrature.hpp"
#include "akprop/special.hpp"

namespace akprop {

enum class ProfileKind { gaussian, zero_mean, band_limited };

/// Radial lookup table with uniform spacing and 4-point (cubic) interpolation.
struct RadialTable {
  double h = 0.0;
  std::vector<double> values;
  double operator()(double r) const;
  double r_max() const { return h * (values.size() - 1); }
};

/// An L^2-normalized perturbation profile phi(x) = phase * e^{i k.x} A(|x - tau|-structure).
/// The base A is radial for the gaussian and band-limited kinds; the zero-mean
/// kind is x_1 times a radial factor.  Decay metadata (M, delta) certify
/// |phi(x)| <= M <x>^{-delta} after recentering.
class Profile {
 public:
  int d = 1;
  ProfileKind kind = ProfileKind::gaussian;
  double scale = 1.0;  // gaussian width, or Fourier support radius
  Eigen::VectorXd tau;
  Eigen::VectorXd modk;
  cplx phase{1.0, 0.0};

  double M = 0.0;
  double delta = 0.0;
  double smooth_M = 0.0;  // amplitude including derivative growth from modulation
  cplx mean{};
  std::optional<double> fourier_radius;

  cplx eval(const Eigen::VectorXd& x) const;
  cplx fourier(const Eigen::VectorXd& xi) const;

  bool is_real() const;
  bool has_radial_base() const { return kind != ProfileKind::zero_mean; }
  bool is_plain_radial() const;  // radial base, untranslated only by tau, unmodulated

  /// Base (centered, unmodulated) radial position profile; radial kinds only.
  double radial_position(double r) const;
  /// Base radial Fourier profile; radial kinds only.
  double radial_fourier(double rho) const;
  /// Pointwise base eval for the zero-mean kind and generic fallbacks.
  cplx base_eval(const Eigen::VectorXd& y) const;
  cplx base_fourier(const Eigen::VectorXd& xi) const;

  double fourier_envelope(double rho) const;
  double fourier_tail_radius(double eps) const;
  double position_tail_radius(double eps) const;

  std::shared_ptr<const RadialTable> table;  // band-limited position table
  double normalization = 1.0;
};

Profile make_gaussian_profile(int d, double width);
Profile make_zero_mean_profile(int d, double width);
Profile make_band_limited_profile(int d, double fourier_radius);

Profile translate(const Profile& p, const Eigen::VectorXd& tau);
Profile modulate(const Profile& p, const Eigen::VectorXd& k);

struct ProfileFamily {
  std::vector<Profile> members;
  Eigen::VectorXd weights;
  double tau0 = 0.0;
  double modulation_offset = 0.0;

  int size() const { return static_cast<int>(members.size()); }
  int dim() const { return members.empty() ? 0 : members.front().d; }
  bool all_real() const;
  /// Exact disjointness certificate from Fourier support centers and radii.
  bool fourier_disjoint() const;
};

/// phi_i(x) = base(x - i*tau0*e1), i = 0..N-1, unit weights unless given.
ProfileFamily make_translated_family(const Profile& base, int n, double tau0,
                                     double weight = 1.0);

/// Band-limited profiles modulated to centers (offset + 2j) e1, j = 1..N.
/// Weights are 2^{-j} when geometric_weights, else 1.
ProfileFamily make_fourier_disjoint_family(int d, int n, double offset,
                                           bool geometric_weights);

Eigen::MatrixXcd gram_matrix(const ProfileFamily& f, const QuadOptions& opts = {});

cplx fourier_transform(const Profile& p, const Eigen::VectorXd& xi);
cplx fourier_transform_quadrature(const Profile& p, const Eigen::VectorXd& xi,
                                  const QuadOptions& opts = {});

struct DecayCheck {
  double M_est = 0.0;
  bool pass = false;
};
DecayCheck verify_decay(const Profile& p, int sample_count);

}  // namespace akprop
