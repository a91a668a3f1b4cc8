#include "kmzi/fock/operations.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kmzi/error.hpp"

namespace kmzi::fock {

namespace {

constexpr double kMaxSqueezeStep = 0.25;
constexpr unsigned kMaxCutoff = 400;
// Kraus branches lighter than this carry no measurable weight.
constexpr double kNegligibleComponent = 1e-26;

// xi^* ab - xi a^dag b^dag applied to v (box truncation drops the outer layer).
PureState squeeze_generator(const PureState& v, Complex xi) {
  PureState out(v.cutoff_a(), v.cutoff_b());
  const unsigned ca = v.cutoff_a(), cb = v.cutoff_b();
  for (unsigned na = 0; na <= ca; ++na) {
    for (unsigned nb = 0; nb <= cb; ++nb) {
      Complex acc{};
      if (na < ca && nb < cb) {
        acc += std::conj(xi) * std::sqrt(double(na + 1) * (nb + 1)) * v.at(na + 1, nb + 1);
      }
      if (na > 0 && nb > 0) acc -= xi * std::sqrt(double(na) * nb) * v.at(na - 1, nb - 1);
      out.at(na, nb) = acc;
    }
  }
  return out;
}

PureState apply_two_mode_squeezer(const PureState& v, Complex xi) {
  const double r = std::abs(xi);
  const unsigned steps = std::max(1u, static_cast<unsigned>(std::ceil(r / kMaxSqueezeStep)));
  const Complex step = xi / double(steps);
  PureState cur = v;
  for (unsigned s = 0; s < steps; ++s) {
    PureState sum = cur;
    PureState term = cur;
    const double ref = std::sqrt(cur.norm_squared());
    for (unsigned k = 1; k < 200; ++k) {
      term = squeeze_generator(term, step);
      for (auto& c : term.amplitudes()) c /= double(k);
      for (std::size_t i = 0; i < sum.dim(); ++i) sum.amplitudes()[i] += term.amplitudes()[i];
      if (std::sqrt(term.norm_squared()) <= 1e-18 * ref) break;
    }
    cur = std::move(sum);
  }
  return cur;
}

std::vector<Complex> coherent_amplitudes(Complex alpha, unsigned cutoff) {
  std::vector<Complex> c(cutoff + 1);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (unsigned k = 1; k <= cutoff; ++k) c[k] = c[k - 1] * alpha / std::sqrt(double(k));
  return c;
}

// sqrt((n + d)! / n!)
double rising_sqrt(unsigned n, unsigned d) {
  double f = 1.0;
  for (unsigned i = 1; i <= d; ++i) f *= double(n + i);
  return std::sqrt(f);
}

}  // namespace

unsigned heuristic_cutoff(double r, double alpha, unsigned m, unsigned n) {
  const double s = std::sinh(r);
  const double spread = (alpha * alpha + s * s) * (1.0 + alpha * alpha) * 6.0;
  return static_cast<unsigned>(std::ceil(spread)) + 4 * (m + n) + 10;
}

InputState build_input_state(double r, double alpha, unsigned m, unsigned n, unsigned cutoff,
                             double tail_tol, double theta, double squeeze_phase) {
  if (!(r >= 0.0) || !(alpha >= 0.0)) throw InvalidArgument("r and alpha must be >= 0");
  if (cutoff < std::max(m, n) + 1) throw InvalidArgument("cutoff too small for photon addition");

  const unsigned ca = cutoff - m, cb = cutoff - n;
  PureState tmscs(ca, cb);
  const auto coh = coherent_amplitudes(std::polar(alpha, theta), ca);
  for (unsigned na = 0; na <= ca; ++na) tmscs.at(na, 0) = coh[na];
  const double before = tmscs.norm_squared();

  tmscs = apply_two_mode_squeezer(tmscs, std::polar(r, squeeze_phase));
  const double drift = std::abs(tmscs.norm_squared() - before);
  if (drift > 1e-10) {
    throw NonConverged("two-mode squeezer norm drift " + std::to_string(drift));
  }
  const double tail = tmscs.tail_mass();
  if (tail > tail_tol) {
    throw NonConverged("tail mass " + std::to_string(tail) + " at cutoff " +
                       std::to_string(cutoff));
  }

  InputState out;
  out.cutoff = cutoff;
  out.state = PureState(cutoff, cutoff);
  for (unsigned na = 0; na <= ca; ++na) {
    const double fa = rising_sqrt(na, m);
    for (unsigned nb = 0; nb <= cb; ++nb) {
      out.state.at(na + m, nb + n) = fa * rising_sqrt(nb, n) * tmscs.at(na, nb);
    }
  }
  out.norm_numeric = out.state.norm_squared();
  out.state.normalize();
  return out;
}

InputState build_input_state_auto(double r, double alpha, unsigned m, unsigned n,
                                  double tail_tol, double theta, double squeeze_phase) {
  unsigned cutoff = heuristic_cutoff(r, alpha, m, n);
  for (;;) {
    try {
      return build_input_state(r, alpha, m, n, cutoff, tail_tol, theta, squeeze_phase);
    } catch (const NonConverged&) {
      if (cutoff * 2 > kMaxCutoff) throw;
      cutoff *= 2;
    }
  }
}

BeamSplitter::BeamSplitter(BeamSplitterKind kind, unsigned max_total)
    : kind_(kind), max_total_(max_total) {
  const double sign = kind == BeamSplitterKind::B1 ? -1.0 : 1.0;
  blocks_.reserve(max_total + 1);
  for (unsigned N = 0; N <= max_total; ++N) {
    // a^dag b + a b^dag on |p, N-p>
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N + 1, N + 1);
    for (unsigned p = 0; p < N; ++p) {
      const double v = std::sqrt(double(p + 1) * (N - p));
      J(p + 1, p) = v;
      J(p, p + 1) = v;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const Eigen::VectorXcd phase =
        (es.eigenvalues().cast<Complex>() * Complex(0.0, sign * std::numbers::pi / 4)).array().exp();
    const Eigen::MatrixXcd V = es.eigenvectors().cast<Complex>();
    blocks_.push_back(V * phase.asDiagonal() * V.transpose());
  }
}

BeamSplitter BeamSplitter::adjoint() const {
  BeamSplitter out = *this;
  out.kind_ = kind_ == BeamSplitterKind::B1 ? BeamSplitterKind::B2 : BeamSplitterKind::B1;
  for (auto& b : out.blocks_) b.adjointInPlace();
  return out;
}

PureState BeamSplitter::apply(const PureState& psi) const {
  if (psi.max_total() > max_total_) {
    throw InvalidArgument("state exceeds the photon number handled by this beam splitter");
  }
  PureState out(max_total_, max_total_);
  for (unsigned N = 0; N <= max_total_; ++N) {
    const unsigned lo = N > psi.cutoff_b() ? N - psi.cutoff_b() : 0;
    const unsigned hi = std::min(N, psi.cutoff_a());
    if (lo > hi) continue;
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(N + 1);
    bool any = false;
    for (unsigned p = lo; p <= hi; ++p) {
      in(p) = psi.at(p, N - p);
      any = any || in(p) != Complex{};
    }
    if (!any) continue;
    const Eigen::VectorXcd res = blocks_[N] * in;
    for (unsigned p = 0; p <= N; ++p) out.at(p, N - p) = res(p);
  }
  return out;
}

PureState apply_beam_splitter(const PureState& psi, BeamSplitterKind kind) {
  return BeamSplitter(kind, psi.max_total()).apply(psi);
}

PureState apply_phase_shifter(const PureState& psi, double phi, unsigned k) {
  if (k != 1 && k != 2) throw InvalidArgument("phase shifter order must be 1 or 2");
  PureState out = psi;
  for (unsigned na = 0; na <= psi.cutoff_a(); ++na) {
    const double nk = k == 1 ? double(na) : double(na) * na;
    const Complex f = std::polar(1.0, phi * nk);
    for (unsigned nb = 0; nb <= psi.cutoff_b(); ++nb) out.at(na, nb) *= f;
  }
  return out;
}

DensityOperator apply_phase_shifter(const DensityOperator& rho, double phi, unsigned k) {
  std::vector<PureState> comps;
  comps.reserve(rho.components().size());
  for (const auto& c : rho.components()) comps.push_back(apply_phase_shifter(c, phi, k));
  return DensityOperator(std::move(comps));
}

DensityOperator apply_beam_splitter(const DensityOperator& rho, const BeamSplitter& bs) {
  std::vector<PureState> comps;
  comps.reserve(rho.components().size());
  for (const auto& c : rho.components()) comps.push_back(bs.apply(c));
  return DensityOperator(std::move(comps));
}

PureState apply_kraus(const PureState& psi, double l, unsigned j) {
  if (!(l >= 0.0 && l <= 1.0)) throw InvalidArgument("loss rate must lie in [0, 1]");
  const double eta = 1.0 - l;
  PureState out(psi.cutoff_a(), psi.cutoff_b());
  if (j > psi.cutoff_a()) return out;
  const double lj = std::pow(l, double(j));
  for (unsigned na = 0; na + j <= psi.cutoff_a(); ++na) {
    // sqrt(C(na+j, j) l^j eta^na)
    const double binom =
        std::exp(std::lgamma(na + j + 1.0) - std::lgamma(na + 1.0) - std::lgamma(j + 1.0));
    const double w = std::sqrt(binom * lj * std::pow(eta, double(na)));
    if (w == 0.0) continue;
    for (unsigned nb = 0; nb <= psi.cutoff_b(); ++nb) out.at(na, nb) = w * psi.at(na + j, nb);
  }
  return out;
}

DensityOperator apply_loss(const PureState& psi, double l) {
  if (!(l >= 0.0 && l <= 1.0)) throw InvalidArgument("loss rate must lie in [0, 1]");
  std::vector<PureState> comps;
  for (unsigned j = 0; j <= psi.cutoff_a(); ++j) {
    if (l == 0.0 && j > 0) break;
    PureState v = apply_kraus(psi, l, j);
    if (v.norm_squared() > kNegligibleComponent) comps.push_back(std::move(v));
  }
  if (comps.empty()) comps.push_back(PureState(psi.cutoff_a(), psi.cutoff_b()));
  return DensityOperator(std::move(comps));
}

PureState lower(const PureState& psi, unsigned da, unsigned db) {
  PureState out(psi.cutoff_a(), psi.cutoff_b());
  for (unsigned na = 0; na + da <= psi.cutoff_a(); ++na) {
    const double fa = rising_sqrt(na, da);
    for (unsigned nb = 0; nb + db <= psi.cutoff_b(); ++nb) {
      out.at(na, nb) = fa * rising_sqrt(nb, db) * psi.at(na + da, nb + db);
    }
  }
  return out;
}

}  // namespace kmzi::fock
