#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace kmzi::fock {

using Complex = std::complex<double>;

inline constexpr double kTailTolerance = 1e-10;

/// Two-mode state vector on the box 0 <= n_a <= cutoff_a, 0 <= n_b <= cutoff_b.
class PureState {
 public:
  PureState() = default;
  PureState(unsigned cutoff_a, unsigned cutoff_b);

  static PureState basis(unsigned cutoff_a, unsigned cutoff_b, unsigned na, unsigned nb);

  unsigned cutoff_a() const { return cutoff_a_; }
  unsigned cutoff_b() const { return cutoff_b_; }
  std::size_t dim() const { return amp_.size(); }
  std::size_t index(unsigned na, unsigned nb) const {
    return static_cast<std::size_t>(na) * (cutoff_b_ + 1) + nb;
  }

  Complex& at(unsigned na, unsigned nb) { return amp_[index(na, nb)]; }
  Complex at(unsigned na, unsigned nb) const { return amp_[index(na, nb)]; }
  std::vector<Complex>& amplitudes() { return amp_; }
  const std::vector<Complex>& amplitudes() const { return amp_; }

  double norm_squared() const;
  /// Divides by the norm; throws NonConverged on a zero vector.
  void normalize();
  /// Probability on the outermost layers n_a = cutoff_a or n_b = cutoff_b.
  double tail_mass() const;
  /// Largest n_a + n_b carrying a nonzero amplitude (0 for the zero vector).
  unsigned max_total() const;

  /// Copy onto a different box, zero-padding or dropping amplitudes.
  PureState resized(unsigned cutoff_a, unsigned cutoff_b) const;

  Complex inner(const PureState& other) const;  // <this|other>

  Eigen::VectorXcd to_eigen() const;

 private:
  unsigned cutoff_a_ = 0;
  unsigned cutoff_b_ = 0;
  std::vector<Complex> amp_;
};

/// Mixed state stored as rho = sum_j |v_j><v_j| with unnormalized v_j that
/// share one box.  Loss channels produce at most cutoff_a+1 components, far
/// fewer than the dimension, so the dense matrix is only built on request.
class DensityOperator {
 public:
  DensityOperator() = default;
  explicit DensityOperator(std::vector<PureState> components);
  static DensityOperator pure(const PureState& psi);

  const std::vector<PureState>& components() const { return components_; }
  unsigned cutoff_a() const;
  unsigned cutoff_b() const;
  double trace() const;

  /// Dense matrix over the Fock-pair index of the box.
  Eigen::MatrixXcd matrix() const;

 private:
  std::vector<PureState> components_;
};

}  // namespace kmzi::fock
