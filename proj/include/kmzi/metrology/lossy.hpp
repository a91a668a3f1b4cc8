#pragma once

#include <array>

#include "kmzi/setup.hpp"

namespace kmzi::metrology {

/// Intermediates of the k=2 lossy bound.  omega and K depend on (eta, mu);
/// G depends on (eta, moments) and is only filled by g_coefficients.
struct KerrCoefficientSet {
  double eta = 1.0;
  std::array<double, 6> K{};
  std::array<double, 7> omega{};
  std::array<double, 5> G{};
};

KerrCoefficientSet kerr_coefficients(double eta, double mu1, double mu2);
std::array<double, 5> g_coefficients(const MomentTable& m, double eta);

/// Upper bound C_Q on the lossy QFI for k=2 with Kraus parameters (mu1, mu2).
double cq_k2(const MomentTable& m, double l, double mu1, double mu2);

/// k=1 counterpart: 4 Var(n' - gamma j) for binomial thinning with rate l.
double cq_k1(const MomentTable& m, double l, double gamma);

struct MuOptimum {
  double mu1 = 0.0;
  double mu2 = 0.0;
  bool fallback = false;  // closed form was singular; grid + Newton used
};

MuOptimum mu_optimal(const MomentTable& m, double l);

struct LossyQfiResult {
  double mu1_opt = 0.0;
  double mu2_opt = 0.0;
  double cq_at_opt = 0.0;
  double cq_before = 0.0;  // mu = (0, 0), gamma = 0
  double cq_after = 0.0;   // mu = (-1, -1), gamma = -1
  double f_lossy = 0.0;
  double qcrb_lossy = 0.0;  // +inf when f_lossy = 0
  bool fallback = false;
};

/// 4 F1 (1-l) <n> / (l F1 + 4 (1-l) <n>), 0 when both terms vanish.
double f_lossy_k1(double f1, double nmean, double l);

LossyQfiResult qfi_lossy_k1(const MomentTable& m, double l);
LossyQfiResult qfi_lossy_k2(const MomentTable& m, double l);

/// Dispatches on p.k; moments come from the analytic path at l = 0.
LossyQfiResult qfi_lossy(const SetupParams& p);

}  // namespace kmzi::metrology
