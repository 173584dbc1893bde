#include <doctest.h>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "heatlab/error.hpp"
#include "heatlab/exponents.hpp"

using namespace heatlab;

TEST_CASE("critical exponents solve the indicial equation") {
  for (int N : {2, 3, 5}) {
    for (double lambda : {hardy_threshold(N) + 1e-3, 0.0, 0.11, 2.0, 30.0}) {
      const auto e = critical_exponents(N, lambda);
      for (double a : {e.plus, e.minus})
        CHECK(std::abs(a * a + (N - 2.0) * a - lambda) <= 1e-12 * (1.0 + std::abs(lambda)));
      CHECK(e.plus >= e.minus);
      CHECK(e.plus + e.minus == doctest::Approx(2.0 - N));
    }
  }
  // Hardy N=3, lambda=2 gives the simple pair 1 and -2.
  const auto h = critical_exponents(3, 2.0);
  CHECK(h.plus == doctest::Approx(1.0));
  CHECK(h.minus == doctest::Approx(-2.0));
}

TEST_CASE("supercritical and degenerate parameters are rejected") {
  CHECK_THROWS_AS(critical_exponents(3, -0.3), Error);
  try {
    critical_exponents(4, -1.5);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SupercriticalParameter);
  }
  CHECK_THROWS_AS(critical_exponents(1, 0.0), Error);
  // At the threshold the two roots coincide at -(N-2)/2.
  const auto t = critical_exponents(4, hardy_threshold(4));
  CHECK(t.plus == doctest::Approx(-1.0));
  CHECK(t.minus == doctest::Approx(-1.0));
}

TEST_CASE("sphere eigenvalues and multiplicities") {
  CHECK(sphere_eigenvalue(2, 3).omega == 9.0);
  CHECK(sphere_eigenvalue(2, 3).multiplicity == 2);
  CHECK(sphere_eigenvalue(3, 2).omega == 6.0);
  CHECK(sphere_eigenvalue(3, 2).multiplicity == 5);
  // Dimension of degree-k harmonic polynomials in N variables.
  for (int k = 2; k < 6; ++k) {
    const double dim = boost::math::binomial_coefficient<double>(5 + k - 1, k) -
                       boost::math::binomial_coefficient<double>(5 + k - 3, k - 2);
    CHECK(sphere_eigenvalue(5, k).multiplicity == static_cast<long>(dim));
  }
}

TEST_CASE("normalization constants against Gamma-function closed forms") {
  for (auto [N, A] : {std::pair{2, 0.0}, std::pair{3, 1.0}, std::pair{3, -0.5}, std::pair{4, 2.5}}) {
    const double d = N + 2.0 * A;
    const auto n = normalization_constants(N, A);
    const double cd = 1.0 / std::sqrt(std::pow(2.0, d - 1.0) * boost::math::tgamma(d / 2.0));
    CHECK(n.c_d == doctest::Approx(cd).epsilon(1e-13));
    const double kappa = std::pow(2.0, d) * std::pow(std::numbers::pi, N / 2.0) *
                         boost::math::tgamma(d / 2.0) / boost::math::tgamma(N / 2.0);
    CHECK(n.kappa == doctest::Approx(kappa).epsilon(1e-13));
  }
  // Free space: kappa = (4 pi)^{N/2}.
  CHECK(normalization_constants(3, 0.0).kappa == doctest::Approx(std::pow(4 * std::numbers::pi, 1.5)));
  CHECK_THROWS_AS(normalization_constants(3, -1.6), Error);
  CHECK(sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
  CHECK(sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
}

TEST_CASE("exponent data by classification") {
  const auto s = make_exponent_data(PotentialSpec::hardy(3, 2.0), Classification::S);
  CHECK(s.A == doctest::Approx(1.0));
  CHECK(s.d == doctest::Approx(5.0));
  const auto c = make_exponent_data(PotentialSpec::hardy(3, 0.11), Classification::C);
  CHECK(c.A == doctest::Approx(-1.1));
  CHECK(c.d == doctest::Approx(0.8));
  // A-(lambda2) <= -N/2 falls outside the theory.
  const auto x = make_exponent_data(PotentialSpec::hardy(3, 1.0), Classification::C);
  CHECK(x.classification == Classification::Excluded);
  CHECK_FALSE(x.reason.empty());
}

TEST_CASE("shifted potentials add omega_k to both inverse-square limits") {
  const auto base = PotentialSpec::interpolated(3, 0.0, 2.0, 2.0, 1.0);
  const auto s = shifted_potential(base, 2);
  CHECK(s.lambda1() == doctest::Approx(6.0));
  CHECK(s.lambda2() == doctest::Approx(8.0));
  CHECK(shifted_potential(PotentialSpec::free(2), 1).lambda2() == doctest::Approx(1.0));
  const auto bump = shifted_potential(PotentialSpec::compact_bump(2, 1.0, 1.0), 1);
  CHECK(bump.r2V(3.0) == doctest::Approx(1.0));
}

TEST_CASE("condition V holds for the interpolated family and fails for a wrong rate") {
  const auto spec = PotentialSpec::interpolated(3, 0.0, 2.0, 2.0, 1.0);
  const auto grid = log_grid(1e-6, 1e4, 16);
  CHECK(grid.front() == doctest::Approx(1e-6));
  CHECK(grid.back() == doctest::Approx(1e4));
  const auto ok = validate_condition_V(spec, grid);
  CHECK_FALSE(ok.violated);
  // r^2 V - l1 ~ 2 r^2 at the origin, so it is bounded by C r^theta only for theta <= 2.
  CHECK(ok.origin_rate_sup == doctest::Approx(2.0).epsilon(1e-3));
  const auto bad = validate_condition_V(spec, grid, 3.0);
  CHECK(bad.violated);
}

TEST_CASE("designer potential from a power-transition profile") {
  const auto seed = HarmonicProfileSeed::power_transition(0.0, -1.0);
  const auto spec = designer_potential(seed, 3);
  // U = (1+r^2)^{-1/2}: r^2 V -> A(A+1) = 0 at infinity.
  CHECK(spec.lambda1() == doctest::Approx(0.0));
  CHECK(spec.lambda2() == doctest::Approx(0.0).epsilon(1e-12));
  const double r = 0.7;
  const double u = std::pow(1 + r * r, -0.5);
  const double up = -r * std::pow(1 + r * r, -1.5);
  const double upp = (2 * r * r - 1) * std::pow(1 + r * r, -2.5);
  CHECK(spec.V(r) == doctest::Approx((upp + 2.0 / r * up) / u).epsilon(1e-10));
  // r^{-3/2} near the origin is the singular root for lambda1 = 3/4.
  CHECK_THROWS_AS(designer_potential(HarmonicProfileSeed::power_transition(-1.5, -1.0), 3), Error);
}
