#pragma once

#include <memory>

#include "kmzi/fock/operations.hpp"
#include "kmzi/setup.hpp"

namespace kmzi::fock {

struct OracleOptions {
  double tail_tol = kTailTolerance;
  unsigned cutoff = 0;     // 0 selects the adaptive heuristic
  double fd_step = 1e-4;   // central-difference step for d<I_D>/dphi
};

struct IntensityStats {
  double mean = 0.0;
  double meansq = 0.0;
  double variance() const { return meansq - mean * mean; }
};

struct OracleMetrics {
  double norm = 0.0;  // N_{m,n}
  double mean_id = 0.0;
  double meansq_id = 0.0;
  double dmean_dphi = 0.0;
  double delta_phi = 0.0;
  double nbar = 0.0;
  double f_ideal = 0.0;
  MomentTable moments;
};

/// Brute-force evaluation of one SetupParams: build |in>, B1, loss, U(phi,k),
/// B2, all in a truncated two-mode Fock basis.  The input, B1|in> and the
/// post-loss state are computed once and shared by every query.
class OraclePipeline {
 public:
  explicit OraclePipeline(const SetupParams& p, OracleOptions opts = {});

  const SetupParams& params() const { return params_; }
  unsigned cutoff() const { return input_.cutoff; }
  double normalization() const { return input_.norm_numeric; }
  const PureState& input() const { return input_.state; }
  const PureState& pre_loss() const { return psi_; }          // B1|in>
  const DensityOperator& post_loss() const { return rho_; }

  DensityOperator internal_state(double phi, unsigned k) const;  // before B2
  DensityOperator output_state(double phi, unsigned k) const;    // after B2

  IntensityStats intensity(double phi, unsigned k) const;
  /// Central difference with one Richardson step (h, h/2).
  double dmean_dphi(double phi, unsigned k) const;
  /// Throws SensitivityUndefined when |d<I_D>/dphi| < 1e-12.
  double delta_phi(double phi, unsigned k) const;
  double nbar(double phi, unsigned k) const;

  MomentTable moments() const;
  /// 4 Var(n_a^k) on B1|in>.
  double qfi(unsigned k) const;

  /// <a^dag^m1 b^dag^n1 a^m2 b^n2> after loss and U(phi, 1).
  Complex d1(unsigned m1, unsigned n1, unsigned m2, unsigned n2, double phi) const;
  /// <(a^dag b)^x> after loss and U(phi, 2).
  Complex d2(unsigned x, double phi) const;

  /// 4[<H1> - <H2>^2] for the Kraus family with phase generator
  /// n^2 - 2 mu1 n j - mu2 j^2 (k=2) or n - gamma j (k=1).
  double cq_k2(double mu1, double mu2) const;
  double cq_k1(double gamma) const;

  OracleMetrics metrics() const;

 private:
  double cq_generic(int k, double c1, double c2) const;

  SetupParams params_;
  OracleOptions opts_;
  InputState input_;
  PureState psi_;
  DensityOperator rho_;
  std::shared_ptr<const BeamSplitter> b2_;
};

}  // namespace kmzi::fock
