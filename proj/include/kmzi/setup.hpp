#pragma once

#include <array>
#include <string>

namespace kmzi {

/// Physical knobs of one interferometer configuration.  The coherent phase
/// is fixed to 0 and the squeezing phase to pi.
struct SetupParams {
  double r = 0.9;      // squeezing parameter
  double alpha = 1.0;  // coherent amplitude
  unsigned m = 0;      // photons added to mode a
  unsigned n = 0;      // photons added to mode b
  double phi = 3.12;   // phase shift
  unsigned k = 1;      // 1 linear, 2 Kerr
  double loss = 0.0;   // loss rate l on the internal a-mode
};

/// Throws InvalidArgument when a field is outside its domain.
void validate(const SetupParams& p);

std::string describe(const SetupParams& p);

/// Photon-number moments of mode a in the pre-loss state B1|in>.
/// Index w-1 holds <n^w> (raw) or <a^dag^w a^w> (factorial).
struct MomentTable {
  std::array<double, 4> raw{};
  std::array<double, 4> factorial{};
  double var_n2 = 0.0;  // <n^4> - <n^2>^2

  double n1() const { return raw[0]; }
  double n2() const { return raw[1]; }
  double n3() const { return raw[2]; }
  double n4() const { return raw[3]; }
};

struct PrecisionLimits {
  double nbar = 0.0;
  double sql = 0.0;
  double hl = 0.0;
  double sub_hl = 0.0;
  double shl = 0.0;
};

/// Throws DegenerateInput for nbar <= 0.
PrecisionLimits precision_limits(double nbar);

}  // namespace kmzi
