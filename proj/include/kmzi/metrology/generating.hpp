#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "kmzi/setup.hpp"

namespace kmzi::metrology {

using Complex = std::complex<double>;

/// Exponents (m1, n1, m2, n2) of a^dag^m1 b^dag^n1 a^m2 b^n2.
using D1Index = std::array<unsigned, 4>;

/// A generating-function moment and its derivative with respect to phi.
struct Moment {
  Complex value;
  Complex dphi;
};

/// N_{m,n}: squared norm of a^dag^m b^dag^n S2(r)|alpha, 0>.
/// Throws FormulaInconsistency unless the result is real and positive.
double normalization(const SetupParams& p);

/// D1 for every index in `which`, extracted from one series whose caps cover
/// them all.  `norm` is N_{m,n}.  phi derivatives are filled when `with_dphi`.
std::vector<Moment> d1_moments(const SetupParams& p, std::span<const D1Index> which, double norm,
                               bool with_dphi);

Complex d1_moment(unsigned m1, unsigned n1, unsigned m2, unsigned n2, const SetupParams& p);

/// D2(x) = <(a^dag b)^x> after loss and the Kerr phase, x in {1, 2}.
Moment d2_moment(unsigned x, const SetupParams& p, double norm, bool with_dphi);

Complex d2_moment(unsigned x, const SetupParams& p);

}  // namespace kmzi::metrology
