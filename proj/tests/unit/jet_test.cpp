#include <doctest.h>

#include <cmath>

#include "kmzi/jet/series.hpp"

using namespace kmzi::jet;

namespace {

SpecPtr xy(unsigned cx, unsigned cy) { return make_spec({"x", "y"}, {cx, cy}); }

double fact(unsigned n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_CASE("var spec packing round-trips") {
  const auto s = make_spec({"a", "b", "c"}, {3, 0, 7});
  const unsigned e[] = {2, 0, 5};
  const auto key = s->pack(e);
  CHECK(s->exponent(key, 0) == 2);
  CHECK(s->exponent(key, 1) == 0);
  CHECK(s->exponent(key, 2) == 5);
  CHECK(s->total_cap() == 10);
  CHECK(s->index_of("c") == 2);
  CHECK_THROWS_AS(s->index_of("d"), IndexError);
  CHECK_THROWS_AS(make_spec({"a", "a"}, {1, 1}), IndexError);
  CHECK_THROWS_AS(make_spec({"a"}, {1, 2}), IndexError);
}

TEST_CASE("multiplication truncates at the caps") {
  const auto s = xy(2, 1);
  const Series x = Series::variable(s, "x"), y = Series::variable(s, "y");
  const Series p = (1.0 + x + y) * (1.0 + x + y) * (1.0 + x + y);
  // (1+x+y)^3 keeps x^i y^j with i <= 2, j <= 1
  const unsigned e21[] = {2, 1}, e20[] = {2, 0}, e11[] = {1, 1};
  CHECK(p.coefficient(e21) == Complex(3.0));
  CHECK(p.coefficient(e20) == Complex(3.0));
  CHECK(p.coefficient(e11) == Complex(6.0));
  CHECK(p.term_count() == 6);
  CHECK((x - x).is_zero());
}

TEST_CASE("exp matches the exponential series") {
  const auto s = xy(6, 3);
  const Series x = Series::variable(s, "x"), y = Series::variable(s, "y");
  const Series e = exp(x * 2.0 + y * Complex(0.0, 1.0) + 0.5);
  for (unsigned i = 0; i <= 6; ++i) {
    for (unsigned j = 0; j <= 3; ++j) {
      const unsigned ord[] = {i, j};
      const Complex expect = std::exp(0.5) * std::pow(2.0, i) * std::pow(Complex(0, 1), j);
      CHECK(std::abs(deriv_at_zero(e, ord) - expect) < 1e-12 * std::abs(expect));
    }
  }
}

TEST_CASE("inv and sqrt are inverse operations") {
  const auto s = xy(5, 4);
  const Series x = Series::variable(s, "x"), y = Series::variable(s, "y");
  const Series u = 2.0 + x * 0.7 - y * Complex(0.3, 0.2) + x * y;
  const Series one = u * inv(u);
  const Series back = sqrt(u) * sqrt(u) - u;
  const Series dev = one - 1.0;
  double worst = 0.0;
  for (const auto& t : dev.terms()) worst = std::max(worst, std::abs(t.coeff));
  for (const auto& t : back.terms()) worst = std::max(worst, std::abs(t.coeff));
  CHECK(worst < 1e-13);
}

TEST_CASE("geometric series from inv") {
  const auto s = make_spec({"x"}, {8});
  const Series g = inv(1.0 - Series::variable(s, "x"));
  for (unsigned i = 0; i <= 8; ++i) {
    const unsigned ord[] = {i};
    CHECK(deriv_at_zero(g, ord).real() == doctest::Approx(fact(i)).epsilon(1e-13));
  }
}

TEST_CASE("series errors") {
  const auto s = xy(2, 2);
  const Series x = Series::variable(s, "x");
  CHECK_THROWS_AS(inv(x), SingularSeries);
  CHECK_THROWS_AS(sqrt(x * 1e-3), SingularSeries);
  CHECK_THROWS_AS(x + Series::variable(xy(2, 3), "x"), SpecMismatch);
  CHECK_THROWS_AS(deriv_at_zero(x, {3, 0}), IndexError);
  CHECK_THROWS_AS(Series::constant(s, Complex(NAN, 0.0)), NonFiniteSeries);
  CHECK_THROWS_AS(exp(x * 1e308 * 10.0), NonFiniteSeries);
}

TEST_CASE("evaluate agrees with Horner on a polynomial") {
  const auto s = xy(3, 3);
  const Series x = Series::variable(s, "x"), y = Series::variable(s, "y");
  const Series p = x * x * y - 3.0 * y + 2.0;
  const Complex pt[] = {Complex(0.5, 0.1), Complex(-1.2, 0.0)};
  const Complex expect = pt[0] * pt[0] * pt[1] - 3.0 * pt[1] + 2.0;
  CHECK(std::abs(p.evaluate(pt) - expect) < 1e-14);
}

TEST_CASE("large dense caps fall back to the sparse accumulator") {
  const auto s = make_spec({"x", "y", "z"}, {200, 200, 200});
  CHECK(s->dense_size() > (1u << 20));
  const Series x = Series::variable(s, "x"), y = Series::variable(s, "y"),
               z = Series::variable(s, "z");
  const Series b = 1.0 + x + y * z;
  const Series p = b * b * b;
  const unsigned e[] = {1, 1, 1};
  CHECK(p.coefficient(e) == Complex(6.0));
  CHECK(p.term_count() == 10);
}
