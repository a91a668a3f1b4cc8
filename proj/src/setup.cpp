#include "kmzi/setup.hpp"

#include <cmath>
#include <cstdio>

#include "kmzi/error.hpp"

namespace kmzi {

void validate(const SetupParams& p) {
  if (!std::isfinite(p.r) || p.r < 0.0) throw InvalidArgument("r must be finite and >= 0");
  if (!std::isfinite(p.alpha) || p.alpha < 0.0) {
    throw InvalidArgument("alpha must be finite and >= 0");
  }
  if (!std::isfinite(p.phi)) throw InvalidArgument("phi must be finite");
  if (p.k != 1 && p.k != 2) throw InvalidArgument("k must be 1 or 2");
  if (!std::isfinite(p.loss) || p.loss < 0.0 || p.loss > 1.0) {
    throw InvalidArgument("loss must lie in [0, 1]");
  }
}

std::string describe(const SetupParams& p) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "k=%u m=%u n=%u r=%g alpha=%g phi=%g loss=%g", p.k, p.m, p.n,
                p.r, p.alpha, p.phi, p.loss);
  return buf;
}

PrecisionLimits precision_limits(double nbar) {
  if (!(nbar > 0.0)) throw DegenerateInput("mean photon number inside the interferometer is 0");
  PrecisionLimits out;
  out.nbar = nbar;
  out.sql = 1.0 / std::sqrt(nbar);
  out.hl = 1.0 / nbar;
  out.sub_hl = 1.0 / std::pow(nbar, 1.5);
  out.shl = 1.0 / (nbar * nbar);
  return out;
}

}  // namespace kmzi
