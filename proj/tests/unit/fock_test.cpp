#include <doctest.h>

#include <cmath>

#include "kmzi/error.hpp"
#include "kmzi/fock/observables.hpp"
#include "kmzi/fock/operations.hpp"
#include "kmzi/fock/pipeline.hpp"
#include "kmzi/metrology/generating.hpp"

using namespace kmzi;
using namespace kmzi::fock;

TEST_CASE("coherent input: F1 = 2 alpha^2 and F2 from Poisson moments") {
  SetupParams p;
  p.r = 0.0;
  p.alpha = 1.0;
  const OraclePipeline o(p);
  CHECK(o.qfi(1) == doctest::Approx(2.0).epsilon(1e-10));
  // lambda = 1/2: 4 (4 l^3 + 6 l^2 + l) = 10
  CHECK(o.qfi(2) == doctest::Approx(10.0).epsilon(1e-10));
}

TEST_CASE("vacuum carries no phase information") {
  SetupParams p;
  p.r = 0.0;
  p.alpha = 0.0;
  const OraclePipeline o(p);
  CHECK(std::abs(o.qfi(1)) < 1e-14);
  CHECK(std::abs(o.nbar(p.phi, 1)) < 1e-14);
}

TEST_CASE("photon-added normalization matches the generating function") {
  SetupParams p;
  p.m = 1;
  const OraclePipeline o(p);
  CHECK(o.normalization() == doctest::Approx(4.10747317632).epsilon(1e-10));
  CHECK(o.normalization() == doctest::Approx(metrology::normalization(p)).epsilon(1e-12));
}

TEST_CASE("Kraus operators are complete") {
  const unsigned c = 20;
  for (double l : {0.0, 0.05, 0.37, 1.0}) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(c + 1, c + 1);
    for (unsigned j = 0; j <= c; ++j) {
      const auto K = kraus_matrix(c, l, j);
      s += K.adjoint() * K;
    }
    CHECK((s - Eigen::MatrixXcd::Identity(c + 1, c + 1)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("loss channel preserves the trace") {
  const auto in = build_input_state_auto(0.5, 0.8, 1, 0);
  for (double l : {0.1, 0.5, 0.9}) {
    CHECK(apply_loss(in.state, l).trace() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("beam splitters are unitary and mutually inverse") {
  const unsigned T = 12;
  const BeamSplitter b1(BeamSplitterKind::B1, T);
  const BeamSplitter b2 = b1.adjoint();
  double worst = 0.0;
  for (unsigned na = 0; na <= T; ++na) {
    for (unsigned nb = 0; na + nb <= T; ++nb) {
      const auto v = PureState::basis(T, T, na, nb);
      const auto u = b1.apply(v);
      worst = std::max(worst, std::abs(u.norm_squared() - 1.0));
      const auto back = b2.apply(u);
      worst = std::max(worst, std::abs(back.inner(v) - 1.0));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("beam splitter maps |1,0> to an equal superposition") {
  const auto out = apply_beam_splitter(PureState::basis(1, 1, 1, 0), BeamSplitterKind::B1);
  CHECK(std::norm(out.at(1, 0)) == doctest::Approx(0.5));
  CHECK(std::norm(out.at(0, 1)) == doctest::Approx(0.5));
}

TEST_CASE("Kerr transform identity on a cutoff-12 space") {
  const unsigned c = 12;
  const Eigen::MatrixXcd a = annihilation(c);
  Eigen::MatrixXcd num = Eigen::MatrixXcd::Zero(c + 1, c + 1);
  for (unsigned n = 0; n <= c; ++n) num(n, n) = double(n);
  for (double phi : {0.3, 1.0, 2.7}) {
    const auto U = phase_shifter_matrix(c, phi, 2);
    const Eigen::MatrixXcd lhs = U.adjoint() * a * U;
    const Eigen::MatrixXcd rhs = std::polar(1.0, phi) * phase_shifter_matrix(c, 2 * phi, 1) * a;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("phase shifters are unitary") {
  for (unsigned k : {1u, 2u}) {
    const auto U = phase_shifter_matrix(15, 2.3, k);
    CHECK((U.adjoint() * U - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("too small a cutoff is reported as non-converged") {
  CHECK_THROWS_AS(build_input_state(0.9, 1.0, 0, 0, 6), NonConverged);
}

TEST_CASE("doubling the cutoff leaves the metrics unchanged") {
  SetupParams p;
  p.r = 0.3;
  p.alpha = 0.5;
  p.m = p.n = 1;
  p.loss = 0.2;
  p.k = 2;
  OracleOptions o1, o2;
  o1.cutoff = 24;
  o2.cutoff = 48;
  const auto a = OraclePipeline(p, o1).metrics();
  const auto b = OraclePipeline(p, o2).metrics();
  auto rel = [](double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); };
  CHECK(rel(a.norm, b.norm) < 1e-8);
  CHECK(rel(a.mean_id, b.mean_id) < 1e-8);
  CHECK(rel(a.meansq_id, b.meansq_id) < 1e-8);
  CHECK(rel(a.delta_phi, b.delta_phi) < 1e-8);
  CHECK(rel(a.nbar, b.nbar) < 1e-8);
  CHECK(rel(a.f_ideal, b.f_ideal) < 1e-8);
}

TEST_CASE("internal photon number does not depend on phi or k") {
  SetupParams p;
  p.m = 1;
  p.loss = 0.25;
  const OraclePipeline o(p);
  const double ref = o.nbar(0.0, 1);
  for (double phi : {0.4, 1.7, 3.12}) {
    for (unsigned k : {1u, 2u}) CHECK(std::abs(o.nbar(phi, k) - ref) <= 1e-12 * ref);
  }
}

TEST_CASE("Fock-state moments are exact integers") {
  for (unsigned n = 0; n <= 6; ++n) {
    const auto v = PureState::basis(8, 0, n, 0);
    for (unsigned w = 1; w <= 4; ++w) {
      CHECK(expectation_real(v, ObservableSpec::number_power(w)) == std::pow(double(n), w));
    }
  }
}

TEST_CASE("normal-ordered monomials are conjugation symmetric") {
  SetupParams p;
  p.m = 1;
  p.n = 2;
  p.loss = 0.3;
  const OraclePipeline o(p);
  const Complex a = o.d1(1, 0, 0, 1, 0.8), b = o.d1(0, 1, 1, 0, 0.8);
  CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
}
