#pragma once

#include <functional>
#include <vector>

#include "akprop/oscint.hpp"

namespace akprop {

/// A member of the symbol class: |psi^(j)(lambda)| <= C_j lambda^{b-j} on
/// Omega for 0 <= j <= K, with Omega either (0, r0) or (r0, inf).
struct SymbolSpec {
  double b = 0.0;
  int K = 1;
  bool high = false;  // Omega = (r0, inf) when set, else (0, r0)
  double r0 = 1.0;
  std::vector<double> deriv_constants;  // C_0 ... C_K
  std::function<double(double)> eval;
};

/// lambda^b shaped by a smooth plateau adapted to Omega; derivative constants
/// sampled on a sweep.  Requires the hypothesis -1 < b < 2K - 1.
SymbolSpec model_symbol(double b, int K, bool high, double r0 = 1.0);

enum class OscRegime { near, far };

struct OscillatoryResult {
  cplx value{};
  OscRegime regime = OscRegime::near;
  double bound = 0.0;  // |t|^{-(1+b)/2} or |t|^{-1/2-b}|x|^b with unit constant
  double ratio = 0.0;
};

struct LabOptions {
  OscQuadOptions osc;
  std::vector<double> epsilon_schedule = {0.04, 0.02, 0.01, 0.005, 0.0025};
  double main_span = 8.0;  // high-Omega direct segment ends at r0 + main_span
};

/// I(t, x) = int_Omega e^{i(t lambda^2 + x lambda)} psi dlambda; the high
/// Omega uses the e^{-eps lambda} regularized tail with extrapolation.
OscillatoryResult oscillatory_integral(double t, double x, const SymbolSpec& psi,
                                       const LabOptions& opts = {});

struct SplitResult {
  cplx i1{};  // contribution of the stationary window |2 lambda + x/t| < |x/t|/2
  cplx i2{};
};

SplitResult stationary_phase_split(double t, double x, const SymbolSpec& psi,
                                   const LabOptions& opts = {});

struct SweepRow {
  double t = 0.0, x = 0.0;
  OscRegime regime = OscRegime::near;
  double abs_value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct BoundSweepReport {
  std::string bound_id;
  double max_ratio = 0.0;
  double doubled_max_ratio = 0.0;
  bool pass = false;  // doubled lattice exceeds the base maximum by <= 10%
  std::vector<SweepRow> rows;
};

/// Lattice sweep of |I|/bound for one of the proved estimates.  bound_id is
/// one of "2.32", "2.33", "2.34"; the factored high-energy case ("2.34")
/// takes the dimension that fixes psi_2 = lambda^{[(d-1)/2]}.
BoundSweepReport verify_bound_sweep(const std::string& bound_id,
                                    const SymbolSpec& psi,
                                    std::span<const double> t_list,
                                    std::span<const double> x_list, int d = 3,
                                    const LabOptions& opts = {});

}  // namespace akprop
