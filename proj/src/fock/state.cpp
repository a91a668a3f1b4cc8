#include "kmzi/fock/state.hpp"

#include <algorithm>
#include <cmath>

#include "kmzi/error.hpp"

namespace kmzi::fock {

PureState::PureState(unsigned cutoff_a, unsigned cutoff_b)
    : cutoff_a_(cutoff_a),
      cutoff_b_(cutoff_b),
      amp_(static_cast<std::size_t>(cutoff_a + 1) * (cutoff_b + 1)) {}

PureState PureState::basis(unsigned cutoff_a, unsigned cutoff_b, unsigned na, unsigned nb) {
  if (na > cutoff_a || nb > cutoff_b) throw InvalidArgument("basis state outside the box");
  PureState s(cutoff_a, cutoff_b);
  s.at(na, nb) = 1.0;
  return s;
}

double PureState::norm_squared() const {
  double sum = 0.0;
  for (const auto& c : amp_) sum += std::norm(c);
  return sum;
}

void PureState::normalize() {
  const double nrm = std::sqrt(norm_squared());
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NonConverged("cannot normalize a zero state");
  for (auto& c : amp_) c /= nrm;
}

double PureState::tail_mass() const {
  double sum = 0.0;
  for (unsigned nb = 0; nb <= cutoff_b_; ++nb) sum += std::norm(at(cutoff_a_, nb));
  for (unsigned na = 0; na < cutoff_a_; ++na) sum += std::norm(at(na, cutoff_b_));
  return sum;
}

unsigned PureState::max_total() const {
  unsigned best = 0;
  for (unsigned na = 0; na <= cutoff_a_; ++na) {
    for (unsigned nb = 0; nb <= cutoff_b_; ++nb) {
      if (at(na, nb) != Complex{}) best = std::max(best, na + nb);
    }
  }
  return best;
}

PureState PureState::resized(unsigned cutoff_a, unsigned cutoff_b) const {
  PureState out(cutoff_a, cutoff_b);
  const unsigned ca = std::min(cutoff_a, cutoff_a_);
  const unsigned cb = std::min(cutoff_b, cutoff_b_);
  for (unsigned na = 0; na <= ca; ++na) {
    for (unsigned nb = 0; nb <= cb; ++nb) out.at(na, nb) = at(na, nb);
  }
  return out;
}

Complex PureState::inner(const PureState& other) const {
  if (other.cutoff_a_ != cutoff_a_ || other.cutoff_b_ != cutoff_b_) {
    throw InvalidArgument("inner product of states on different boxes");
  }
  Complex sum{};
  for (std::size_t i = 0; i < amp_.size(); ++i) sum += std::conj(amp_[i]) * other.amp_[i];
  return sum;
}

Eigen::VectorXcd PureState::to_eigen() const {
  return Eigen::Map<const Eigen::VectorXcd>(amp_.data(), static_cast<Eigen::Index>(amp_.size()));
}

DensityOperator::DensityOperator(std::vector<PureState> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("density operator needs one component");
  for (const auto& c : components_) {
    if (c.cutoff_a() != components_.front().cutoff_a() ||
        c.cutoff_b() != components_.front().cutoff_b()) {
      throw InvalidArgument("density operator components on different boxes");
    }
  }
}

DensityOperator DensityOperator::pure(const PureState& psi) { return DensityOperator({psi}); }

unsigned DensityOperator::cutoff_a() const { return components_.front().cutoff_a(); }
unsigned DensityOperator::cutoff_b() const { return components_.front().cutoff_b(); }

double DensityOperator::trace() const {
  double t = 0.0;
  for (const auto& c : components_) t += c.norm_squared();
  return t;
}

Eigen::MatrixXcd DensityOperator::matrix() const {
  const auto d = static_cast<Eigen::Index>(components_.front().dim());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& c : components_) {
    const Eigen::VectorXcd v = c.to_eigen();
    rho.noalias() += v * v.adjoint();
  }
  return rho;
}

}  // namespace kmzi::fock
