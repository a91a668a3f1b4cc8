#include "kmzi/fock/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "kmzi/error.hpp"
#include "kmzi/fock/observables.hpp"

namespace kmzi::fock {

namespace {

constexpr double kMinSensitivity = 1e-12;

InputState make_input(const SetupParams& p, const OracleOptions& o) {
  validate(p);
  if (o.cutoff != 0) return build_input_state(p.r, p.alpha, p.m, p.n, o.cutoff, o.tail_tol);
  return build_input_state_auto(p.r, p.alpha, p.m, p.n, o.tail_tol);
}

}  // namespace

OraclePipeline::OraclePipeline(const SetupParams& p, OracleOptions opts)
    : params_(p), opts_(opts), input_(make_input(p, opts)) {
  // at least 4 so that a^4 and (a^dag b)^2 fit even for near-vacuum input
  const unsigned total = std::max(input_.state.max_total(), 4u);
  const BeamSplitter b1(BeamSplitterKind::B1, total);
  psi_ = b1.apply(input_.state);
  rho_ = apply_loss(psi_, p.loss);
  b2_ = std::make_shared<const BeamSplitter>(b1.adjoint());
}

DensityOperator OraclePipeline::internal_state(double phi, unsigned k) const {
  return apply_phase_shifter(rho_, phi, k);
}

DensityOperator OraclePipeline::output_state(double phi, unsigned k) const {
  return apply_beam_splitter(internal_state(phi, k), *b2_);
}

IntensityStats OraclePipeline::intensity(double phi, unsigned k) const {
  const DensityOperator out = output_state(phi, k);
  IntensityStats s;
  s.mean = expectation_real(out, ObservableSpec::intensity_difference());
  s.meansq = expectation_real(out, ObservableSpec::intensity_difference_squared());
  return s;
}

double OraclePipeline::dmean_dphi(double phi, unsigned k) const {
  const double h = opts_.fd_step;
  auto central = [&](double step) {
    return (intensity(phi + step, k).mean - intensity(phi - step, k).mean) / (2.0 * step);
  };
  const double dh = central(h);
  const double dh2 = central(h / 2);
  return (4.0 * dh2 - dh) / 3.0;
}

double OraclePipeline::delta_phi(double phi, unsigned k) const {
  const double d = dmean_dphi(phi, k);
  if (std::abs(d) < kMinSensitivity) {
    throw SensitivityUndefined("d<I_D>/dphi vanishes at " + describe(params_));
  }
  const IntensityStats s = intensity(phi, k);
  return std::sqrt(std::max(0.0, s.variance())) / std::abs(d);
}

double OraclePipeline::nbar(double phi, unsigned k) const {
  const DensityOperator in = internal_state(phi, k);
  return expectation_real(in, ObservableSpec::monomial(1, 0, 1, 0)) +
         expectation_real(in, ObservableSpec::monomial(0, 1, 0, 1));
}

MomentTable OraclePipeline::moments() const {
  MomentTable t;
  for (unsigned w = 1; w <= 4; ++w) {
    t.raw[w - 1] = expectation_real(psi_, ObservableSpec::number_power(w));
    t.factorial[w - 1] = expectation_real(psi_, ObservableSpec::monomial(w, 0, w, 0));
  }
  t.var_n2 = t.raw[3] - t.raw[1] * t.raw[1];
  return t;
}

double OraclePipeline::qfi(unsigned k) const {
  if (k != 1 && k != 2) throw InvalidArgument("k must be 1 or 2");
  const double lo = expectation_real(psi_, ObservableSpec::number_power(k));
  const double hi = expectation_real(psi_, ObservableSpec::number_power(2 * k));
  return 4.0 * (hi - lo * lo);
}

Complex OraclePipeline::d1(unsigned m1, unsigned n1, unsigned m2, unsigned n2, double phi) const {
  return expectation(internal_state(phi, 1), ObservableSpec::monomial(m1, n1, m2, n2));
}

Complex OraclePipeline::d2(unsigned x, double phi) const {
  // (a^dag b)^x = a^dag^x b^x, so <v|.|v> = <a^x v | b^x v>.
  Complex sum{};
  for (const auto& v : internal_state(phi, 2).components()) {
    sum += lower(v, x, 0).inner(lower(v, 0, x));
  }
  return sum;
}

double OraclePipeline::cq_generic(int k, double c1, double c2) const {
  const double l = params_.loss;
  double h1 = 0.0, h2 = 0.0;
  for (unsigned j = 0; j <= psi_.cutoff_a(); ++j) {
    if (l == 0.0 && j > 0) break;
    const PureState w = apply_kraus(psi_, l, j);
    for (unsigned na = 0; na <= w.cutoff_a(); ++na) {
      double p = 0.0;
      for (unsigned nb = 0; nb <= w.cutoff_b(); ++nb) p += std::norm(w.at(na, nb));
      if (p == 0.0) continue;
      const double n = na, jj = j;
      const double x = k == 2 ? n * n - 2.0 * c1 * n * jj - c2 * jj * jj : n - c1 * jj;
      h1 += p * x * x;
      h2 += p * x;
    }
  }
  return 4.0 * (h1 - h2 * h2);
}

double OraclePipeline::cq_k2(double mu1, double mu2) const { return cq_generic(2, mu1, mu2); }

double OraclePipeline::cq_k1(double gamma) const { return cq_generic(1, gamma, 0.0); }

OracleMetrics OraclePipeline::metrics() const {
  OracleMetrics m;
  m.norm = normalization();
  const IntensityStats s = intensity(params_.phi, params_.k);
  m.mean_id = s.mean;
  m.meansq_id = s.meansq;
  m.dmean_dphi = dmean_dphi(params_.phi, params_.k);
  if (std::abs(m.dmean_dphi) < kMinSensitivity) {
    throw SensitivityUndefined("d<I_D>/dphi vanishes at " + describe(params_));
  }
  m.delta_phi = std::sqrt(std::max(0.0, s.variance())) / std::abs(m.dmean_dphi);
  m.nbar = nbar(params_.phi, params_.k);
  m.f_ideal = qfi(params_.k);
  m.moments = moments();
  return m;
}

}  // namespace kmzi::fock
