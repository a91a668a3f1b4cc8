#include "kmzi/metrology/analytic.hpp"

#include <cmath>
#include <limits>

#include "kmzi/error.hpp"

namespace kmzi::metrology {

namespace {

constexpr double kImagTolerance = 1e-8;
constexpr double kVarianceFloor = -1e-10;
constexpr double kMinSensitivity = 1e-12;

double checked_real(Complex v, const char* what, const SetupParams& p) {
  if (std::abs(v.imag()) > kImagTolerance * std::max(1.0, std::abs(v.real()))) {
    throw FormulaInconsistency(std::string(what) + " is not real at " + describe(p));
  }
  return v.real();
}

double clamp_variance(double v, double scale, const char* what) {
  if (v < kVarianceFloor * std::max(1.0, scale)) {
    throw FormulaInconsistency(std::string(what) + " has a negative variance");
  }
  return std::max(0.0, v);
}

}  // namespace

MomentTable moments_from_factorial(const std::array<double, 4>& factorial,
                                   const StirlingTable& stirling) {
  MomentTable t;
  t.factorial = factorial;
  for (int w = 0; w < 4; ++w) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += stirling[w][j] * factorial[j];
    t.raw[w] = s;
  }
  t.var_n2 = t.raw[3] - t.raw[1] * t.raw[1];
  return t;
}

AnalyticEvaluator::AnalyticEvaluator(const SetupParams& p)
    : params_(p), norm_(metrology::normalization(p)) {}

Complex AnalyticEvaluator::d1(unsigned m1, unsigned n1, unsigned m2, unsigned n2) const {
  const D1Index idx{m1, n1, m2, n2};
  return d1_moments(params_, std::span<const D1Index>(&idx, 1), norm_, false)[0].value;
}

Complex AnalyticEvaluator::d2(unsigned x) const {
  return d2_moment(x, params_, norm_, false).value;
}

IntensityResult AnalyticEvaluator::intensity() const {
  return params_.k == 1 ? intensity_k1() : intensity_k2();
}

IntensityResult AnalyticEvaluator::intensity_k1() const {
  static constexpr std::array<D1Index, 7> kIdx = {{
      {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0},
      {1, 1, 1, 1}, {2, 0, 0, 2}, {0, 2, 2, 0},
  }};
  const auto d = d1_moments(params_, kIdx, norm_, true);
  const Complex I(0.0, 1.0);
  IntensityResult out;
  out.mean = checked_real(I * (d[0].value - d[1].value), "<I_D>", params_);
  out.dmean_dphi = checked_real(I * (d[0].dphi - d[1].dphi), "d<I_D>/dphi", params_);
  out.meansq = checked_real(
      d[2].value + d[3].value + 2.0 * d[4].value - d[5].value - d[6].value, "<I_D^2>", params_);
  return out;
}

IntensityResult AnalyticEvaluator::intensity_k2() const {
  static constexpr std::array<D1Index, 3> kIdx = {{{0, 1, 0, 1}, {1, 0, 1, 0}, {1, 1, 1, 1}}};
  const auto d = d1_moments(params_, kIdx, norm_, false);
  const Moment one = d2_moment(1, params_, norm_, true);
  const Complex two = d2_moment(2, params_, norm_, false).value;
  IntensityResult out;
  const Complex I(0.0, 1.0);
  out.mean = checked_real(I * (one.value - std::conj(one.value)), "<I_D>", params_);
  out.dmean_dphi = checked_real(I * (one.dphi - std::conj(one.dphi)), "d<I_D>/dphi", params_);
  out.meansq = checked_real(d[0].value + d[1].value + 2.0 * d[2].value - two - std::conj(two),
                            "<I_D^2>", params_);
  return out;
}

double AnalyticEvaluator::phase_sensitivity() const {
  const IntensityResult s = intensity();
  if (std::abs(s.dmean_dphi) < kMinSensitivity) {
    throw SensitivityUndefined("d<I_D>/dphi vanishes at " + describe(params_));
  }
  const double var = clamp_variance(s.variance(), s.meansq, "<I_D>");
  return std::sqrt(var) / std::abs(s.dmean_dphi);
}

double AnalyticEvaluator::mean_photon_number() const {
  static constexpr std::array<D1Index, 2> kIdx = {{{1, 0, 1, 0}, {0, 1, 0, 1}}};
  const auto d = d1_moments(params_, kIdx, norm_, false);
  return checked_real(d[0].value + d[1].value, "mean photon number", params_);
}

MomentTable AnalyticEvaluator::photon_moments(const StirlingTable& stirling) const {
  static constexpr std::array<D1Index, 4> kIdx = {
      {{1, 0, 1, 0}, {2, 0, 2, 0}, {3, 0, 3, 0}, {4, 0, 4, 0}}};
  SetupParams lossless = params_;
  lossless.loss = 0.0;
  const auto d = d1_moments(lossless, kIdx, norm_, false);
  std::array<double, 4> fact{};
  for (int j = 0; j < 4; ++j) {
    fact[j] = checked_real(d[j].value, "factorial moment", params_);
    if (fact[j] < kVarianceFloor * std::max(1.0, std::abs(fact[j]))) {
      throw FormulaInconsistency("negative factorial moment at " + describe(params_));
    }
  }
  return moments_from_factorial(fact, stirling);
}

QfiIdeal AnalyticEvaluator::qfi_ideal(unsigned k, const StirlingTable& stirling) const {
  QfiIdeal q;
  q.f = qfi_from_moments(photon_moments(stirling), k);
  q.qcrb = q.f > 0.0 ? 1.0 / std::sqrt(q.f) : std::numeric_limits<double>::infinity();
  return q;
}

double qfi_from_moments(const MomentTable& m, unsigned k) {
  if (k == 1) return 4.0 * clamp_variance(m.n2() - m.n1() * m.n1(), m.n2(), "n_a");
  if (k == 2) return 4.0 * clamp_variance(m.var_n2, m.n4(), "n_a^2");
  throw InvalidArgument("k must be 1 or 2");
}

IntensityResult intensity_stats_k1(const SetupParams& p) {
  return AnalyticEvaluator(p).intensity_k1();
}

IntensityResult intensity_stats_k2(const SetupParams& p) {
  return AnalyticEvaluator(p).intensity_k2();
}

double phase_sensitivity(const SetupParams& p) { return AnalyticEvaluator(p).phase_sensitivity(); }

double mean_photon_number(const SetupParams& p) {
  return AnalyticEvaluator(p).mean_photon_number();
}

MomentTable photon_moments(const SetupParams& p) { return AnalyticEvaluator(p).photon_moments(); }

QfiIdeal qfi_ideal(const SetupParams& p) { return AnalyticEvaluator(p).qfi_ideal(p.k); }

}  // namespace kmzi::metrology
