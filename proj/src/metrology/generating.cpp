#include "kmzi/metrology/generating.hpp"

#include <algorithm>
#include <cmath>

#include "kmzi/error.hpp"
#include "kmzi/jet/series.hpp"

namespace kmzi::metrology {

using jet::Series;

namespace {

constexpr double kImagTolerance = 1e-12;

struct Vars {
  jet::SpecPtr spec;
  Series var(const char* name) const { return Series::variable(spec, name); }
  Series c(Complex v) const { return Series::constant(spec, v); }
};

// e^{i s (phi + p)} truncated at the cap of p.
Series phase(const Vars& v, double s, double phi) {
  return jet::exp(v.var("p") * Complex(0.0, s)) * std::polar(1.0, s * phi);
}

}  // namespace

double normalization(const SetupParams& p) {
  validate(p);
  Vars v{jet::make_spec({"t1", "tau1", "t2", "tau2"}, {p.m, p.n, p.m, p.n})};
  const double ch = std::cosh(p.r), sh = std::sinh(p.r);
  const Series t1 = v.var("t1"), T1 = v.var("tau1"), t2 = v.var("t2"), T2 = v.var("tau2");

  const Series e = ((t1 * t2 + T1 * T2) * ch + (t1 * T1 + t2 * T2) * sh) * ch +
                   ((t1 + t2) * ch + (T1 + T2) * sh) * p.alpha;
  const Complex d = jet::deriv_at_zero(jet::exp(e), {p.m, p.n, p.m, p.n});
  if (std::abs(d.imag()) > kImagTolerance * std::max(1.0, std::abs(d)) || !(d.real() > 0.0)) {
    throw FormulaInconsistency("normalization is not real and positive at " + describe(p));
  }
  return d.real();
}

std::vector<Moment> d1_moments(const SetupParams& p, std::span<const D1Index> which, double norm,
                               bool with_dphi) {
  validate(p);
  std::array<unsigned, 4> caps{};
  for (const auto& q : which) {
    for (int i = 0; i < 4; ++i) caps[i] = std::max(caps[i], q[i]);
  }
  Vars v{jet::make_spec({"t1", "tau1", "t2", "tau2", "x1", "y1", "x2", "y2", "p"},
                        {p.m, p.n, p.m, p.n, caps[0], caps[1], caps[2], caps[3],
                         with_dphi ? 1u : 0u})};
  const double ch = std::cosh(p.r), sh = std::sinh(p.r);
  const double q = std::sqrt(2.0) / 2.0;
  const double et = std::sqrt(1.0 - p.loss);
  const Complex I(0.0, 1.0);
  const Series t1 = v.var("t1"), T1 = v.var("tau1"), t2 = v.var("t2"), T2 = v.var("tau2");
  const Series x1 = v.var("x1"), y1 = v.var("y1"), x2 = v.var("x2"), y2 = v.var("y2");
  const Series em = phase(v, -1.0, p.phi), ep = phase(v, 1.0, p.phi);

  const Series A1 = (em * x1 * et + y1 * I) * q;
  const Series A2 = (y2 - ep * x2 * (I * et)) * q;
  const Series A3 = (y1 + em * x1 * (I * et)) * q;
  const Series A4 = (ep * x2 * et - y2 * I) * q;

  const Series e = (t1 + t2 + A1 + A4) * (p.alpha * ch) + (T1 + T2 + A2 + A3) * (p.alpha * sh) +
                   (t1 * sh + A2 * ch) * T1 * ch + (T2 * sh + A1 * ch) * t2 * ch +
                   (t1 * ch + A2 * sh) * (A3 * sh + (t2 + A4) * ch) +
                   (T2 * ch + A1 * sh) * (A4 * sh + (T1 + A3) * ch);
  const Series g = jet::exp(e);

  std::vector<Moment> out;
  out.reserve(which.size());
  for (const auto& w : which) {
    std::array<unsigned, 9> order{p.m, p.n, p.m, p.n, w[0], w[1], w[2], w[3], 0};
    Moment mo;
    mo.value = jet::deriv_at_zero(g, order) / norm;
    if (with_dphi) {
      order[8] = 1;
      mo.dphi = jet::deriv_at_zero(g, order) / norm;
    }
    out.push_back(mo);
  }
  return out;
}

Complex d1_moment(unsigned m1, unsigned n1, unsigned m2, unsigned n2, const SetupParams& p) {
  const D1Index idx{m1, n1, m2, n2};
  return d1_moments(p, std::span<const D1Index>(&idx, 1), normalization(p), false)[0].value;
}

Moment d2_moment(unsigned x, const SetupParams& p, double norm, bool with_dphi) {
  validate(p);
  if (x != 1 && x != 2) throw InvalidArgument("D2 order must be 1 or 2");
  Vars v{jet::make_spec({"t1", "tau1", "t2", "tau2", "s", "p"},
                        {p.m, p.n, p.m, p.n, x, with_dphi ? 1u : 0u})};
  const double ch = std::cosh(p.r), th = std::tanh(p.r);
  const double l = p.loss, eta = 1.0 - l, et = std::sqrt(eta);
  const Complex I(0.0, 1.0);
  const Series t1 = v.var("t1"), T1 = v.var("tau1"), t2 = v.var("t2"), T2 = v.var("tau2");
  const Series s = v.var("s"), pv = v.var("p");
  const double xx = x;

  const Series V1 = (phase(v, -2.0 * xx, p.phi) * eta + l) * 0.5;
  const Series V2 = (1.0 - s * (I * et)) * 0.5;
  const Series V3 = (1.0 + s * (I * et)) * 0.5;
  const Series V4 = t1 + p.alpha / ch;
  const Series V5 = t2 + p.alpha / ch;
  const Series Q = (V1 * V1 * 4.0 + 1.0 + s * s * eta) * 0.5;
  const Series P12 = (V1 + V2) * (V1 - V2);

  const Series M0 = V5 * (P12 * V5 * (-I * th) - (V1 - V2) * T1 * I + (V1 + V2) * V4);
  const Series M1 = Q * (th * th) - 1.0;
  const Series M2 = T2 + ((V1 + V2) * V4 - (V1 - V2) * T1 * I) * th - P12 * V5 * (2.0 * I * th * th);
  const Series M3 = (V1 - V3) * V4 * I + (V1 + V3) * T1 + V5 * Q * th;
  const Series M4 = (V1 + V3) * (V1 - V3) * (I * th);
  const Series M5 = P12 * (-I * th * th * th);

  // Principal branch on the constant term of the denominator.
  const Series den = M1 * M1 - M4 * M5 * 4.0;
  const Series arg = (pv + p.phi) * (-xx * xx * I) - p.alpha * p.alpha + M0 +
                     (M4 * M2 * M2 + M5 * M3 * M3 - M1 * M2 * M3) * jet::inv(den);
  const Series g = jet::exp(arg) * jet::inv(jet::sqrt(den));

  const double scale = ch * ch * norm;
  std::array<unsigned, 6> order{p.m, p.n, p.m, p.n, x, 0};
  Moment mo;
  mo.value = jet::deriv_at_zero(g, order) / scale;
  if (with_dphi) {
    order[5] = 1;
    mo.dphi = jet::deriv_at_zero(g, order) / scale;
  }
  return mo;
}

Complex d2_moment(unsigned x, const SetupParams& p) {
  return d2_moment(x, p, normalization(p), false).value;
}

}  // namespace kmzi::metrology
