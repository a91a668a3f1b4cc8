#pragma once

#include <array>

#include "kmzi/fock/state.hpp"

namespace kmzi::fock {

struct ObservableSpec {
  enum class Kind { IntensityDifference, IntensityDifferenceSquared, NumberPower, NormalMonomial };

  Kind which = Kind::IntensityDifference;
  unsigned w = 1;                      // NumberPower: n_a^w, w in 1..4
  std::array<unsigned, 4> exps{};     // NormalMonomial: a^dag^m1 b^dag^n1 a^m2 b^n2

  static ObservableSpec intensity_difference() { return {Kind::IntensityDifference, 1, {}}; }
  static ObservableSpec intensity_difference_squared() {
    return {Kind::IntensityDifferenceSquared, 1, {}};
  }
  static ObservableSpec number_power(unsigned w) { return {Kind::NumberPower, w, {}}; }
  static ObservableSpec monomial(unsigned m1, unsigned n1, unsigned m2, unsigned n2) {
    return {Kind::NormalMonomial, 1, {m1, n1, m2, n2}};
  }

  bool hermitian() const;
};

/// Tr(rho O).  Throws InvalidArgument for malformed specs or exponents beyond
/// the box.
Complex expectation(const PureState& psi, const ObservableSpec& obs);
Complex expectation(const DensityOperator& rho, const ObservableSpec& obs);

/// Real part of a Hermitian expectation; throws NumericalInconsistency when
/// the imaginary part exceeds 1e-8 (relative to max(1, |value|)).
double expectation_real(const DensityOperator& rho, const ObservableSpec& obs);
double expectation_real(const PureState& psi, const ObservableSpec& obs);

/// Single-mode matrices on {|0>, ..., |cutoff>}.
Eigen::MatrixXcd annihilation(unsigned cutoff);
/// U(phi, k) = exp(i phi (a^dag a)^k).
Eigen::MatrixXcd phase_shifter_matrix(unsigned cutoff, double phi, unsigned k);
/// sqrt(l^j / j!) (1-l)^{a^dag a / 2} a^j.
Eigen::MatrixXcd kraus_matrix(unsigned cutoff, double l, unsigned j);

}  // namespace kmzi::fock
