#include "kmzi/metrology/lossy.hpp"

#include <cmath>
#include <limits>

#include "kmzi/error.hpp"
#include "kmzi/metrology/analytic.hpp"

namespace kmzi::metrology {

namespace {

constexpr double kSingularRatio = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_loss(double l) {
  if (!(l >= 0.0 && l <= 1.0)) throw InvalidArgument("loss must lie in [0, 1]");
}

double nonnegative_bound(double f, double scale) {
  if (f < -1e-10 * std::max(1.0, scale)) {
    throw FormulaInconsistency("lossy QFI bound came out negative");
  }
  return std::max(0.0, f);
}

double qcrb_of(double f) { return f > 0.0 ? 1.0 / std::sqrt(f) : kInf; }

// Grid search over [-2, 1]^2 followed by one Newton step on the quadratic.
MuOptimum numeric_minimum(const MomentTable& m, double l) {
  MuOptimum best{0.0, 0.0, true};
  double cbest = kInf;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const double a = -2.0 + 0.15 * i, b = -2.0 + 0.15 * j;
      const double c = cq_k2(m, l, a, b);
      if (c < cbest) {
        cbest = c;
        best.mu1 = a;
        best.mu2 = b;
      }
    }
  }
  const double h = 0.1;
  auto C = [&](double a, double b) { return cq_k2(m, l, a, b); };
  const double a = best.mu1, b = best.mu2;
  const double g1 = (C(a + h, b) - C(a - h, b)) / (2 * h);
  const double g2 = (C(a, b + h) - C(a, b - h)) / (2 * h);
  const double h11 = (C(a + h, b) - 2 * cbest + C(a - h, b)) / (h * h);
  const double h22 = (C(a, b + h) - 2 * cbest + C(a, b - h)) / (h * h);
  const double h12 = (C(a + h, b + h) - C(a + h, b - h) - C(a - h, b + h) + C(a - h, b - h)) /
                     (4 * h * h);
  const double det = h11 * h22 - h12 * h12;
  if (h11 > 0.0 && det > kSingularRatio * std::abs(h11 * h22)) {
    const double na = a - (h22 * g1 - h12 * g2) / det;
    const double nb = b - (h11 * g2 - h12 * g1) / det;
    if (std::isfinite(na) && std::isfinite(nb) && C(na, nb) <= cbest) {
      best.mu1 = na;
      best.mu2 = nb;
    }
  }
  return best;
}

}  // namespace

KerrCoefficientSet kerr_coefficients(double eta, double mu1, double mu2) {
  KerrCoefficientSet s;
  s.eta = eta;
  auto& w = s.omega;
  w[0] = 1 + 2 * mu1 - mu2;
  w[1] = mu1 - mu2;
  w[2] = 1 + 2 * (3 * mu1 - 2 * mu2) + (2 * mu1 - mu2) * (4 * mu1 - 3 * mu2);
  w[3] = 7 * mu2 - 6 * mu1 + 24 * mu1 * mu2 - 14 * mu1 * mu1 - 9 * mu2 * mu2;
  w[4] = mu2 * w[0] - 2 * w[1] * w[1];
  w[5] = 9 + 40 * mu1 - 22 * mu2 + 44 * mu1 * mu1 - 48 * mu1 * mu2 + 13 * mu2 * mu2;
  w[6] = 7 + 40 * mu1 - 26 * mu2 + 52 * mu1 * mu1 - 64 * mu1 * mu2 + 19 * mu2 * mu2;

  const double e = eta, e2 = e * e, e3 = e2 * e;
  auto& K = s.K;
  K[0] = w[0] * e2 - 2 * w[1] * e - mu2;
  // omega_3 and omega_6 enter linearly (see the decisions ledger).
  K[1] = 2 * e * (3 * w[0] * w[0] * e3 - 3 * w[2] * e2 - w[3] * e + w[4]);
  K[2] = e * (11 * w[0] * w[0] * e3 - 2 * w[5] * e2 + w[6] * e - 4 * w[0] * w[1]);
  K[3] = e * w[0] * w[0] * (6 * e3 - 12 * e2 + 7 * e - 1);
  K[4] = 2 * (1 - e) * e * w[0] * K[0];
  K[5] = (1 - e) * (1 - e) * e2 * w[0] * w[0];
  return s;
}

std::array<double, 5> g_coefficients(const MomentTable& m, double e) {
  const double V = m.var_n2, n1 = m.n1(), n2 = m.n2(), n3 = m.n3();
  const double u = 1 - e;
  const double c6 = 6 * e * e - 6 * e + 1;
  const double c11 = 11 * e * e - 11 * e + 2;
  std::array<double, 5> G{};
  G[0] = 2 * (-u * e * (V + 2 * n2 * n1 - n1 * n1) - c6 * (n3 + n1) + c11 * n2);
  G[1] = u * u * V + 3 * u * (2 * e - 1) * n3 + (11 * e * e - 13 * e + 3) * n2 - c6 * n1 -
         u * (2 * e - 1) * n2 * n1 + e * u * n1 * n1;
  G[2] = e * e * V - 3 * e * (2 * e - 1) * n3 + (11 * e * e - 9 * e + 1) * n2 - c6 * n1 +
         e * (2 * e - 1) * n2 * n1 + e * u * n1 * n1;
  G[3] = -u * u * u * V - 6 * e * u * u * n3 - e * u * (11 * e - 4) * n2 - e * c6 * n1 +
         2 * e * u * u * n2 * n1 + e * e * u * n1 * n1;
  G[4] = e * (-e * u * (V - n1 * n1) - c6 * (n3 + n1) + c11 * n2 +
              (2 * e * e - 2 * e + 1) * n2 * n1);
  return G;
}

double cq_k2(const MomentTable& m, double l, double mu1, double mu2) {
  check_loss(l);
  const auto K = kerr_coefficients(1.0 - l, mu1, mu2).K;
  const double n1 = m.n1(), n2 = m.n2(), n3 = m.n3();
  return 4.0 * (K[0] * K[0] * m.var_n2 - K[1] * n3 + K[2] * n2 - K[3] * n1 - K[4] * n2 * n1 -
                K[5] * n1 * n1);
}

double cq_k1(const MomentTable& m, double l, double gamma) {
  check_loss(l);
  const double eta = 1.0 - l, N = m.n1(), V = m.n2() - N * N;
  const double var_kept = eta * l * N + eta * eta * V;
  const double cov = l * eta * (V - N);
  const double var_lost = l * eta * N + l * l * V;
  return 4.0 * (var_kept - 2.0 * gamma * cov + gamma * gamma * var_lost);
}

MuOptimum mu_optimal(const MomentTable& m, double l) {
  check_loss(l);
  const double eta = 1.0 - l;
  const auto G = g_coefficients(m, eta);
  const double den = G[0] * G[3] - 2 * eta * G[1] * G[1];
  const double scale = std::abs(G[0] * G[3]) + 2 * eta * G[1] * G[1];
  if (!(scale > 0.0) || std::abs(den) <= kSingularRatio * scale) return numeric_minimum(m, l);
  MuOptimum out;
  out.mu1 = (G[1] * G[4] - G[2] * G[3]) / den;
  out.mu2 = (G[0] * G[4] - 2 * eta * G[1] * G[2]) / den;
  if (!std::isfinite(out.mu1) || !std::isfinite(out.mu2)) return numeric_minimum(m, l);
  return out;
}

double f_lossy_k1(double f1, double nmean, double l) {
  check_loss(l);
  if (l == 0.0) return f1;
  const double eta = 1.0 - l;
  const double den = l * f1 + 4.0 * eta * nmean;
  if (den == 0.0) return 0.0;
  return 4.0 * f1 * eta * nmean / den;
}

LossyQfiResult qfi_lossy_k1(const MomentTable& m, double l) {
  check_loss(l);
  const double eta = 1.0 - l, N = m.n1();
  const double f1 = qfi_from_moments(m, 1), V = f1 / 4.0;
  LossyQfiResult r;
  r.cq_before = cq_k1(m, l, 0.0);
  r.cq_after = cq_k1(m, l, -1.0);
  r.f_lossy = nonnegative_bound(f_lossy_k1(f1, N, l), f1);
  const double gden = N * eta + l * V;
  r.mu1_opt = gden > 0.0 ? eta * (V - N) / gden : kNaN;
  r.mu2_opt = kNaN;
  r.cq_at_opt = std::isfinite(r.mu1_opt) ? cq_k1(m, l, r.mu1_opt) : r.f_lossy;
  r.qcrb_lossy = qcrb_of(r.f_lossy);
  return r;
}

LossyQfiResult qfi_lossy_k2(const MomentTable& m, double l) {
  const MuOptimum opt = mu_optimal(m, l);
  LossyQfiResult r;
  r.mu1_opt = opt.mu1;
  r.mu2_opt = opt.mu2;
  r.fallback = opt.fallback;
  r.cq_at_opt = cq_k2(m, l, opt.mu1, opt.mu2);
  r.cq_before = cq_k2(m, l, 0.0, 0.0);
  r.cq_after = cq_k2(m, l, -1.0, -1.0);
  const double f = std::min({r.cq_at_opt, r.cq_before, r.cq_after});
  r.f_lossy = nonnegative_bound(f, r.cq_after);
  r.qcrb_lossy = qcrb_of(r.f_lossy);
  return r;
}

LossyQfiResult qfi_lossy(const SetupParams& p) {
  const MomentTable m = AnalyticEvaluator(p).photon_moments();
  return p.k == 1 ? qfi_lossy_k1(m, p.loss) : qfi_lossy_k2(m, p.loss);
}

}  // namespace kmzi::metrology
