#pragma once

#include <numbers>
#include <vector>

#include "kmzi/fock/state.hpp"

namespace kmzi::fock {

struct InputState {
  PureState state;           // normalized a^dag^m b^dag^n S2 |alpha, 0>
  double norm_numeric = 0;   // squared norm before normalization
  unsigned cutoff = 0;       // per-mode cutoff actually used
};

/// ceil((alpha^2 + sinh^2 r)(1 + alpha^2) * 6) + 4(m + n) + 10
unsigned heuristic_cutoff(double r, double alpha, unsigned m, unsigned n);

/// Photon-added two-mode squeezed coherent state on the box (cutoff, cutoff).
/// S2 = exp[xi^* ab - xi a^dag b^dag] with xi = r e^{i squeeze_phase}; the
/// coherent amplitude of mode a is alpha e^{i theta}.
/// Throws NonConverged when the tail mass exceeds `tail_tol`.
InputState build_input_state(double r, double alpha, unsigned m, unsigned n, unsigned cutoff,
                             double tail_tol = kTailTolerance, double theta = 0.0,
                             double squeeze_phase = std::numbers::pi);

/// Starts from heuristic_cutoff and doubles the cutoff until converged.
InputState build_input_state_auto(double r, double alpha, unsigned m, unsigned n,
                                  double tail_tol = kTailTolerance, double theta = 0.0,
                                  double squeeze_phase = std::numbers::pi);

enum class BeamSplitterKind { B1, B2 };

/// 50:50 beam splitter B1 = exp[-i pi/4 (a^dag b + a b^dag)], B2 = B1^dag.
/// Acts blockwise on total photon number N <= max_total, so it is exact on
/// any state whose support lies in that triangle.  Output box is
/// (max_total, max_total).
class BeamSplitter {
 public:
  BeamSplitter(BeamSplitterKind kind, unsigned max_total);

  unsigned max_total() const { return max_total_; }
  BeamSplitterKind kind() const { return kind_; }
  /// The inverse splitter (B1 <-> B2) without recomputing the blocks.
  BeamSplitter adjoint() const;
  PureState apply(const PureState& psi) const;

 private:
  BeamSplitterKind kind_;
  unsigned max_total_;
  std::vector<Eigen::MatrixXcd> blocks_;  // blocks_[N] acts on |p, N-p>, p = 0..N
};

PureState apply_beam_splitter(const PureState& psi, BeamSplitterKind kind);

/// Multiplies the amplitude at (n_a, n_b) by exp(i phi n_a^k), k in {1, 2}.
PureState apply_phase_shifter(const PureState& psi, double phi, unsigned k);
DensityOperator apply_phase_shifter(const DensityOperator& rho, double phi, unsigned k);
DensityOperator apply_beam_splitter(const DensityOperator& rho, const BeamSplitter& bs);

/// Loss on mode a: K_j = sqrt(l^j / j!) (1-l)^{n_a/2} a^j, j = 0..cutoff_a.
DensityOperator apply_loss(const PureState& psi, double l);

/// K_j |psi> for one Kraus index.
PureState apply_kraus(const PureState& psi, double l, unsigned j);

/// a^da b^db |psi> on the same box.
PureState lower(const PureState& psi, unsigned da, unsigned db);

}  // namespace kmzi::fock
