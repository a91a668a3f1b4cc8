#include <doctest.h>

#include <cmath>

#include "kmzi/error.hpp"
#include "kmzi/metrology/analytic.hpp"
#include "kmzi/metrology/lossy.hpp"

using namespace kmzi;
using namespace kmzi::metrology;

namespace {

SetupParams point(unsigned m, unsigned n, double loss = 0.0, unsigned k = 1) {
  SetupParams p;
  p.m = m;
  p.n = n;
  p.loss = loss;
  p.k = k;
  return p;
}

}  // namespace

TEST_CASE("Stirling rows reproduce raw moments of Fock states") {
  for (unsigned n = 0; n <= 6; ++n) {
    std::array<double, 4> f{};
    for (unsigned j = 1; j <= 4; ++j) {
      double v = 1.0;
      for (unsigned i = 0; i < j; ++i) v *= n >= i ? double(n - i) : 0.0;
      f[j - 1] = n >= j ? v : 0.0;
    }
    const auto t = moments_from_factorial(f);
    for (unsigned w = 1; w <= 4; ++w) CHECK(t.raw[w - 1] == std::pow(double(n), w));
  }
}

TEST_CASE("D1 is conjugation symmetric and the intensities are real") {
  const AnalyticEvaluator a(point(1, 2, 0.3));
  const Complex x = a.d1(1, 0, 0, 1), y = a.d1(0, 1, 1, 0);
  CHECK(std::abs(x - std::conj(y)) < 1e-12 * std::abs(x));
  const Complex u = a.d1(2, 0, 1, 1), v = a.d1(1, 1, 2, 0);
  CHECK(std::abs(u - std::conj(v)) < 1e-12 * std::abs(u));
  CHECK_NOTHROW(a.intensity_k1());
  CHECK_NOTHROW(a.intensity_k2());
}

TEST_CASE("k=1: <I_D> flips sign under phi -> phi + pi, Delta phi is pi-periodic") {
  for (double phi : {0.1, 0.9, 2.0, 3.12}) {
    SetupParams p = point(1, 1, 0.2);
    p.phi = phi;
    const auto a = intensity_stats_k1(p);
    const double da = phase_sensitivity(p);
    p.phi = phi + M_PI;
    const auto b = intensity_stats_k1(p);
    CHECK(std::abs(a.mean + b.mean) < 1e-9);
    CHECK(std::abs(a.variance() - b.variance()) < 1e-9 * a.meansq);
    CHECK(std::abs(da - phase_sensitivity(p)) < 1e-9 * da);
  }
}

TEST_CASE("mean photon number does not depend on phi or k") {
  SetupParams p = point(2, 1, 0.1);
  const double ref = mean_photon_number(p);
  for (double phi : {0.3, 2.2}) {
    for (unsigned k : {1u, 2u}) {
      p.phi = phi;
      p.k = k;
      CHECK(std::abs(mean_photon_number(p) - ref) <= 1e-12 * ref);
    }
  }
}

TEST_CASE("variances are nonnegative") {
  for (unsigned mn : {0u, 1u, 2u}) {
    for (unsigned k : {1u, 2u}) {
      const auto s = AnalyticEvaluator(point(mn, mn, 0.3, k)).intensity();
      CHECK(s.variance() >= -1e-10 * s.meansq);
    }
    CHECK(photon_moments(point(mn, mn)).var_n2 >= 0.0);
  }
}

TEST_CASE("coherent state QFI") {
  SetupParams p;
  p.r = 0.0;
  CHECK(qfi_ideal(p).f == doctest::Approx(2.0).epsilon(1e-12));
  p.k = 2;
  CHECK(qfi_ideal(p).f == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("stationary point is reported as undefined sensitivity") {
  // r = 0, alpha = 0: nothing enters the interferometer
  SetupParams p;
  p.r = 0.0;
  p.alpha = 0.0;
  CHECK_THROWS_AS(phase_sensitivity(p), SensitivityUndefined);
  CHECK_THROWS_AS(precision_limits(mean_photon_number(p)), DegenerateInput);
}

TEST_CASE("Kerr coefficient corner identities") {
  for (double eta : {0.0, 0.3, 0.7, 1.0}) {
    const auto c = kerr_coefficients(eta, -1.0, -1.0);
    CHECK(c.K[0] == 1.0);
    for (int i = 1; i < 6; ++i) CHECK(c.K[i] == 0.0);
  }
  const auto c = kerr_coefficients(1.0, 0.0, 0.0);
  CHECK(c.K[0] == 1.0);
  for (int i = 1; i < 6; ++i) CHECK(c.K[i] == 0.0);
}

TEST_CASE("lossy k=1 bound") {
  CHECK(f_lossy_k1(8.0, 2.0, 0.5) == 4.0);
  const auto m = photon_moments(point(1, 1));
  const double f1 = qfi_from_moments(m, 1);
  CHECK(qfi_lossy_k1(m, 0.0).f_lossy == f1);
  CHECK(qfi_lossy_k1(m, 1.0).f_lossy == 0.0);
  CHECK(std::isinf(qfi_lossy_k1(m, 1.0).qcrb_lossy));
  double prev = f1;
  for (int i = 1; i <= 10; ++i) {
    const double l = 0.1 * i;
    const double f = qfi_lossy_k1(m, l).f_lossy;
    CHECK(f <= prev);
    CHECK(f <= 4.0 * (1.0 - l) * m.n1() / l * (1.0 + 1e-12));
    prev = f;
  }
  // the closed form is the minimum of 4 Var(n' - gamma j)
  const auto r = qfi_lossy_k1(m, 0.3);
  CHECK(cq_k1(m, 0.3, r.mu1_opt) == doctest::Approx(r.f_lossy).epsilon(1e-12));
}

TEST_CASE("lossy k=2 bound") {
  const auto m = photon_moments(point(1, 1));
  const double f2 = qfi_from_moments(m, 2);
  CHECK(qfi_lossy_k2(m, 0.0).f_lossy == doctest::Approx(f2).epsilon(1e-12));
  for (double l : {0.05, 0.3, 0.6, 0.95}) {
    const auto r = qfi_lossy_k2(m, l);
    CHECK(r.f_lossy <= f2);
    CHECK(r.cq_at_opt <= r.cq_before * (1.0 + 1e-12));
    CHECK(r.cq_at_opt <= r.cq_after * (1.0 + 1e-12));
    CHECK(cq_k2(m, l, -1.0, -1.0) == doctest::Approx(4.0 * m.var_n2).epsilon(1e-15));
  }
}

TEST_CASE("degenerate moments take the numeric minimizer") {
  MomentTable zero;
  const auto opt = mu_optimal(zero, 0.3);
  CHECK(opt.fallback);
  CHECK(qfi_lossy_k2(zero, 0.3).f_lossy == 0.0);
}

TEST_CASE("precision limits are ordered for nbar > 1") {
  const auto lim = precision_limits(mean_photon_number(point(1, 1)));
  CHECK(lim.sql > lim.hl);
  CHECK(lim.hl > lim.sub_hl);
  CHECK(lim.sub_hl > lim.shl);
}

TEST_CASE("invalid parameters are rejected") {
  SetupParams p;
  p.loss = 1.5;
  CHECK_THROWS_AS(normalization(p), InvalidArgument);
  p.loss = 0.0;
  p.k = 3;
  CHECK_THROWS_AS(normalization(p), InvalidArgument);
}
