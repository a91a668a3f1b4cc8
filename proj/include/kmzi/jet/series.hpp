#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "kmzi/error.hpp"
#include "kmzi/jet/var_spec.hpp"

namespace kmzi::jet {

using Complex = std::complex<double>;

class SeriesError : public kmzi::Error {
 public:
  using kmzi::Error::Error;
};

/// Operands were built over different variable sets.
class SpecMismatch : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

/// inv/sqrt of a series whose constant term is (numerically) zero.
class SingularSeries : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

/// A coefficient became NaN or infinite.
class NonFiniteSeries : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

/// Unknown variable, or an exponent beyond its cap.
class IndexError : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

/// Below this magnitude a constant term is treated as zero by inv/sqrt.
inline constexpr double kSingularConstant = 1e-12;

/// Multivariate polynomial with complex coefficients, truncated at the
/// per-variable caps of its VarSpec.  Absent monomials are exactly zero.
/// Values are immutable once built; all operations return new series.
class Series {
 public:
  struct Term {
    std::uint64_t key;
    Complex coeff;
  };

  /// The zero series over `spec`.
  explicit Series(SpecPtr spec);

  static Series constant(SpecPtr spec, Complex c);
  static Series variable(SpecPtr spec, std::size_t index);
  static Series variable(SpecPtr spec, std::string_view name);
  /// c * prod_i x_i^{exps_i}; zero if any exponent exceeds its cap.
  static Series monomial(SpecPtr spec, std::span<const unsigned> exps, Complex c);

  const VarSpec& spec() const { return *spec_; }
  const SpecPtr& spec_ptr() const { return spec_; }

  Complex constant_term() const;
  Complex coefficient(std::span<const unsigned> exps) const;
  std::size_t term_count() const { return terms_.size(); }
  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Value of the polynomial at a point (one complex number per variable).
  Complex evaluate(std::span<const Complex> point) const;

  Series operator-() const;
  friend Series operator+(const Series& a, const Series& b);
  friend Series operator-(const Series& a, const Series& b);
  friend Series operator*(const Series& a, const Series& b);
  friend Series operator*(const Series& a, Complex c);
  friend Series operator*(Complex c, const Series& a) { return a * c; }
  friend Series operator+(const Series& a, Complex c);
  friend Series operator+(Complex c, const Series& a) { return a + c; }
  friend Series operator-(const Series& a, Complex c) { return a + (-c); }
  friend Series operator-(Complex c, const Series& a) { return (-a) + c; }

  Series& operator+=(const Series& b) { return *this = *this + b; }
  Series& operator*=(const Series& b) { return *this = *this * b; }

 private:
  Series(SpecPtr spec, std::vector<Term> terms);
  void check_finite() const;
  friend void require_same_spec(const Series& a, const Series& b);

  SpecPtr spec_;
  std::vector<Term> terms_;  // sorted by key, no exact zeros
};

Series exp(const Series& s);
Series inv(const Series& s);
Series sqrt(const Series& s);

/// d^{|order|} s / prod dx_i^{order_i} at the origin.
Complex deriv_at_zero(const Series& s, std::span<const unsigned> order);
inline Complex deriv_at_zero(const Series& s, std::initializer_list<unsigned> order) {
  return deriv_at_zero(s, std::span<const unsigned>(order.begin(), order.size()));
}

}  // namespace kmzi::jet
