#include "kmzi/jet/series.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace kmzi::jet {

namespace {

// Above this many monomials the product accumulator switches to a hash map.
constexpr std::uint64_t kDenseAccumulatorLimit = std::uint64_t{1} << 20;

std::vector<Series::Term> merge_add(std::span<const Series::Term> a,
                                    std::span<const Series::Term> b) {
  std::vector<Series::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].key < b[j].key)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].key < a[i].key) {
      out.push_back(b[j++]);
    } else {
      const Complex c = a[i].coeff + b[j].coeff;
      if (c != Complex{}) out.push_back({a[i].key, c});
      ++i;
      ++j;
    }
  }
  return out;
}

double factorial(unsigned k) {
  double f = 1.0;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

void require_same_spec(const Series& a, const Series& b) {
  if (a.spec_ != b.spec_ && !(*a.spec_ == *b.spec_)) {
    throw SpecMismatch("series built over different variable sets");
  }
}

Series::Series(SpecPtr spec) : spec_(std::move(spec)) {
  if (!spec_) throw IndexError("Series: null VarSpec");
}

Series::Series(SpecPtr spec, std::vector<Term> terms)
    : spec_(std::move(spec)), terms_(std::move(terms)) {
  check_finite();
}

void Series::check_finite() const {
  for (const auto& t : terms_) {
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag())) {
      throw NonFiniteSeries("series coefficient is not finite");
    }
  }
}

Series Series::constant(SpecPtr spec, Complex c) {
  std::vector<Term> terms;
  if (c != Complex{}) terms.push_back({0, c});
  return Series(std::move(spec), std::move(terms));
}

Series Series::variable(SpecPtr spec, std::size_t index) {
  if (index >= spec->size()) throw IndexError("Series::variable: unknown variable index");
  MultiIndex e(spec->size(), 0);
  e[index] = 1;
  return monomial(std::move(spec), e, 1.0);
}

Series Series::variable(SpecPtr spec, std::string_view name) {
  const std::size_t i = spec->index_of(name);
  return variable(std::move(spec), i);
}

Series Series::monomial(SpecPtr spec, std::span<const unsigned> exps, Complex c) {
  if (exps.size() != spec->size()) throw IndexError("Series::monomial: wrong arity");
  std::vector<Term> terms;
  if (spec->fits(exps) && c != Complex{}) terms.push_back({spec->pack(exps), c});
  return Series(std::move(spec), std::move(terms));
}

Complex Series::constant_term() const {
  if (!terms_.empty() && terms_.front().key == 0) return terms_.front().coeff;
  return {};
}

Complex Series::coefficient(std::span<const unsigned> exps) const {
  const std::uint64_t key = spec_->pack(exps);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const Term& t, std::uint64_t k) { return t.key < k; });
  if (it != terms_.end() && it->key == key) return it->coeff;
  return {};
}

Complex Series::evaluate(std::span<const Complex> point) const {
  if (point.size() != spec_->size()) throw IndexError("Series::evaluate: wrong arity");
  Complex sum{};
  for (const auto& t : terms_) {
    Complex v = t.coeff;
    for (std::size_t i = 0; i < point.size(); ++i) {
      const unsigned e = spec_->exponent(t.key, i);
      for (unsigned p = 0; p < e; ++p) v *= point[i];
    }
    sum += v;
  }
  return sum;
}

Series Series::operator-() const {
  std::vector<Term> out(terms_);
  for (auto& t : out) t.coeff = -t.coeff;
  return Series(spec_, std::move(out));
}

Series operator+(const Series& a, const Series& b) {
  require_same_spec(a, b);
  return Series(a.spec_, merge_add(a.terms_, b.terms_));
}

Series operator-(const Series& a, const Series& b) { return a + (-b); }

Series operator+(const Series& a, Complex c) {
  return a + Series::constant(a.spec_, c);
}

Series operator*(const Series& a, Complex c) {
  if (c == Complex{}) return Series(a.spec_);
  std::vector<Series::Term> out;
  out.reserve(a.terms_.size());
  for (const auto& t : a.terms_) {
    const Complex v = t.coeff * c;
    if (v != Complex{}) out.push_back({t.key, v});
  }
  return Series(a.spec_, std::move(out));
}

Series operator*(const Series& a, const Series& b) {
  require_same_spec(a, b);
  const VarSpec& spec = *a.spec_;
  if (a.terms_.empty() || b.terms_.empty()) return Series(a.spec_);

  std::vector<Series::Term> out;
  const std::uint64_t dense = spec.dense_size();
  if (dense != 0 && dense <= kDenseAccumulatorLimit) {
    std::vector<std::uint64_t> slot_a(a.terms_.size()), slot_b(b.terms_.size());
    for (std::size_t i = 0; i < a.terms_.size(); ++i) slot_a[i] = spec.dense_slot(a.terms_[i].key);
    for (std::size_t j = 0; j < b.terms_.size(); ++j) slot_b[j] = spec.dense_slot(b.terms_[j].key);

    std::vector<Complex> acc(dense);
    std::vector<char> used(dense, 0);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> touched;  // (key, slot)
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      const auto& ta = a.terms_[i];
      for (std::size_t j = 0; j < b.terms_.size(); ++j) {
        const std::uint64_t key = ta.key + b.terms_[j].key;
        if (!spec.sum_fits(key)) continue;
        const std::uint64_t slot = slot_a[i] + slot_b[j];
        if (!used[slot]) {
          used[slot] = 1;
          touched.emplace_back(key, slot);
        }
        acc[slot] += ta.coeff * b.terms_[j].coeff;
      }
    }
    std::sort(touched.begin(), touched.end());
    out.reserve(touched.size());
    for (const auto& [key, slot] : touched) {
      if (acc[slot] != Complex{}) out.push_back({key, acc[slot]});
    }
  } else {
    std::unordered_map<std::uint64_t, Complex> acc;
    for (const auto& ta : a.terms_) {
      for (const auto& tb : b.terms_) {
        const std::uint64_t key = ta.key + tb.key;
        if (spec.sum_fits(key)) acc[key] += ta.coeff * tb.coeff;
      }
    }
    out.reserve(acc.size());
    for (const auto& [key, c] : acc) {
      if (c != Complex{}) out.push_back({key, c});
    }
    std::sort(out.begin(), out.end(),
              [](const Series::Term& x, const Series::Term& y) { return x.key < y.key; });
  }
  return Series(a.spec_, std::move(out));
}

Series exp(const Series& s) {
  const Complex c0 = s.constant_term();
  if (!std::isfinite(c0.real()) || !std::isfinite(c0.imag())) {
    throw NonFiniteSeries("exp: constant term is not finite");
  }
  const Series u = s - c0;
  Series r = Series::constant(s.spec_ptr(), 1.0);
  for (unsigned k = s.spec().total_cap(); k >= 1; --k) {
    r = (u * r) * Complex(1.0 / k) + 1.0;
  }
  return r * std::exp(c0);
}

Series inv(const Series& s) {
  const Complex c0 = s.constant_term();
  if (std::abs(c0) <= kSingularConstant) {
    throw SingularSeries("inv: constant term is numerically zero");
  }
  const Series v = (s - c0) * (1.0 / c0);
  Series r = Series::constant(s.spec_ptr(), 1.0);
  for (unsigned k = s.spec().total_cap(); k >= 1; --k) {
    r = 1.0 - v * r;
  }
  return r * (1.0 / c0);
}

Series sqrt(const Series& s) {
  const Complex c0 = s.constant_term();
  if (std::abs(c0) <= kSingularConstant) {
    throw SingularSeries("sqrt: constant term is numerically zero");
  }
  const unsigned order = s.spec().total_cap();
  // binom(1/2, k)
  std::vector<double> coef(order + 1);
  coef[0] = 1.0;
  for (unsigned k = 1; k <= order; ++k) coef[k] = coef[k - 1] * (0.5 - (k - 1)) / k;

  const Series v = (s - c0) * (1.0 / c0);
  Series r = Series::constant(s.spec_ptr(), coef[order]);
  for (unsigned k = order; k >= 1; --k) {
    r = v * r + coef[k - 1];
  }
  return r * std::sqrt(c0);
}

Complex deriv_at_zero(const Series& s, std::span<const unsigned> order) {
  if (!s.spec().fits(order)) {
    throw IndexError("deriv_at_zero: order exceeds the caps of the series");
  }
  double scale = 1.0;
  for (unsigned o : order) scale *= factorial(o);
  return s.coefficient(order) * scale;
}

}  // namespace kmzi::jet
