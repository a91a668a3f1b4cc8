#include "kmzi/fock/observables.hpp"

#include <algorithm>
#include <cmath>

#include "kmzi/error.hpp"
#include "kmzi/fock/operations.hpp"

namespace kmzi::fock {

namespace {

void check_spec(const ObservableSpec& obs, unsigned ca, unsigned cb) {
  using K = ObservableSpec::Kind;
  if (obs.which == K::NumberPower && (obs.w < 1 || obs.w > 4)) {
    throw InvalidArgument("number power must lie in 1..4");
  }
  if (obs.which == K::NormalMonomial) {
    const auto& e = obs.exps;
    if (std::max(e[0], e[2]) > ca || std::max(e[1], e[3]) > cb) {
      throw InvalidArgument("observable exponents exceed the cutoffs");
    }
  }
}

double diagonal_value(const ObservableSpec& obs, unsigned na, unsigned nb) {
  using K = ObservableSpec::Kind;
  switch (obs.which) {
    case K::IntensityDifference:
      return double(na) - double(nb);
    case K::IntensityDifferenceSquared: {
      const double d = double(na) - double(nb);
      return d * d;
    }
    case K::NumberPower:
      return std::pow(double(na), double(obs.w));
    default:
      return 0.0;
  }
}

}  // namespace

bool ObservableSpec::hermitian() const {
  if (which != Kind::NormalMonomial) return true;
  return exps[0] == exps[2] && exps[1] == exps[3];
}

Complex expectation(const PureState& psi, const ObservableSpec& obs) {
  check_spec(obs, psi.cutoff_a(), psi.cutoff_b());
  if (obs.which == ObservableSpec::Kind::NormalMonomial) {
    const auto& e = obs.exps;
    return lower(psi, e[0], e[1]).inner(lower(psi, e[2], e[3]));
  }
  double sum = 0.0;
  for (unsigned na = 0; na <= psi.cutoff_a(); ++na) {
    for (unsigned nb = 0; nb <= psi.cutoff_b(); ++nb) {
      sum += std::norm(psi.at(na, nb)) * diagonal_value(obs, na, nb);
    }
  }
  return sum;
}

Complex expectation(const DensityOperator& rho, const ObservableSpec& obs) {
  Complex sum{};
  for (const auto& c : rho.components()) sum += expectation(c, obs);
  return sum;
}

namespace {
double checked_real(Complex v) {
  if (std::abs(v.imag()) > 1e-8 * std::max(1.0, std::abs(v))) {
    throw NumericalInconsistency("Hermitian observable has imaginary expectation " +
                                 std::to_string(v.imag()));
  }
  return v.real();
}
}  // namespace

double expectation_real(const DensityOperator& rho, const ObservableSpec& obs) {
  return checked_real(expectation(rho, obs));
}

double expectation_real(const PureState& psi, const ObservableSpec& obs) {
  return checked_real(expectation(psi, obs));
}

Eigen::MatrixXcd annihilation(unsigned cutoff) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (unsigned n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Eigen::MatrixXcd phase_shifter_matrix(unsigned cutoff, double phi, unsigned k) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (unsigned n = 0; n <= cutoff; ++n) {
    u(n, n) = std::polar(1.0, phi * (k == 1 ? double(n) : double(n) * n));
  }
  return u;
}

Eigen::MatrixXcd kraus_matrix(unsigned cutoff, double l, unsigned j) {
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  const double pref = std::sqrt(std::pow(l, double(j)) / std::tgamma(j + 1.0));
  for (unsigned n = 0; n + j <= cutoff; ++n) {
    double f = 1.0;
    for (unsigned i = 1; i <= j; ++i) f *= double(n + i);
    K(n, n + j) = pref * std::pow(1.0 - l, 0.5 * n) * std::sqrt(f);
  }
  return K;
}

}  // namespace kmzi::fock
