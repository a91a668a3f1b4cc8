#pragma once

#include <array>

#include "kmzi/metrology/generating.hpp"

namespace kmzi::metrology {

/// Row w-1 expresses <n^w> in the factorial moments <a^dag^j a^j>, j = 1..4.
using StirlingTable = std::array<std::array<double, 4>, 4>;

inline constexpr StirlingTable kStirling = {{
    {1, 0, 0, 0},
    {1, 1, 0, 0},
    {1, 3, 1, 0},
    {1, 7, 6, 1},
}};

MomentTable moments_from_factorial(const std::array<double, 4>& factorial,
                                   const StirlingTable& stirling = kStirling);

struct IntensityResult {
  double mean = 0.0;
  double meansq = 0.0;
  double dmean_dphi = 0.0;
  double variance() const { return meansq - mean * mean; }
};

struct QfiIdeal {
  double f = 0.0;
  double qcrb = 0.0;  // 1/sqrt(f), +inf when f = 0
};

/// Analytic path for one SetupParams.  N_{m,n} is computed once.
class AnalyticEvaluator {
 public:
  explicit AnalyticEvaluator(const SetupParams& p);

  const SetupParams& params() const { return params_; }
  double normalization() const { return norm_; }

  Complex d1(unsigned m1, unsigned n1, unsigned m2, unsigned n2) const;
  Complex d2(unsigned x) const;

  /// <I_D>, <I_D^2> and d<I_D>/dphi for the k of the params.
  IntensityResult intensity() const;
  IntensityResult intensity_k1() const;
  IntensityResult intensity_k2() const;

  /// Throws SensitivityUndefined when |d<I_D>/dphi| < 1e-12.
  double phase_sensitivity() const;

  /// D1(1,0,1,0) + D1(0,1,0,1) with the loss of the params.
  double mean_photon_number() const;

  /// Moments of B1|in>, always at l = 0.
  MomentTable photon_moments(const StirlingTable& stirling = kStirling) const;

  QfiIdeal qfi_ideal(unsigned k, const StirlingTable& stirling = kStirling) const;

 private:
  SetupParams params_;
  double norm_;
};

IntensityResult intensity_stats_k1(const SetupParams& p);
IntensityResult intensity_stats_k2(const SetupParams& p);
double phase_sensitivity(const SetupParams& p);
double mean_photon_number(const SetupParams& p);
MomentTable photon_moments(const SetupParams& p);
QfiIdeal qfi_ideal(const SetupParams& p);

/// 4[<n^2> - <n>^2] or 4[<n^4> - <n^2>^2]; throws FormulaInconsistency for a
/// variance below -1e-10.
double qfi_from_moments(const MomentTable& m, unsigned k);

}  // namespace kmzi::metrology
