#include <doctest.h>

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "heatlab/harmonic.hpp"

using namespace heatlab;
namespace ode = boost::numeric::odeint;

namespace {

// Independent integration of U'' + (N-1)/r U' = V U from a two-term series at r0.
std::array<double, 2> integrate_profile(const PotentialSpec& spec, double r0, double u0, double du0,
                                        double r1) {
  std::array<double, 2> y = {u0, du0};
  const int N = spec.N();
  auto rhs = [&](const std::array<double, 2>& s, std::array<double, 2>& ds, double r) {
    ds[0] = s[1];
    ds[1] = spec.V(r) * s[0] - (N - 1.0) / r * s[1];
  };
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<std::array<double, 2>>>(
                              1e-13, 1e-13),
                          rhs, y, r0, r1, 1e-5);
  return y;
}

}  // namespace

TEST_CASE("free profile is constant and F has the closed form r^2 / 2N") {
  for (int N : {2, 3, 4}) {
    const auto setup = prepare(PotentialSpec::free(N));
    CHECK(setup.profile.value(0.3) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(setup.profile.value(500.0) == doctest::Approx(1.0).epsilon(1e-8));
    // In the plane lambda = 0 is the threshold and U = 1 is the A- tail.
    CHECK(setup.exps.classification == (N == 2 ? Classification::C : Classification::S));
    for (double r : {0.01, 0.5, 3.0, 40.0})
      CHECK(setup.profile.F(r) == doctest::Approx(r * r / (2.0 * N)).epsilon(1e-7));
  }
}

TEST_CASE("Hardy profile is the pure power r^A with c* = 1") {
  const auto setup = prepare(PotentialSpec::hardy(3, 2.0));
  const auto& p = setup.profile;
  CHECK(setup.fit.tail == TailType::RegularPower);
  CHECK(setup.exps.classification == Classification::S);
  CHECK(p.c_star == doctest::Approx(1.0).epsilon(1e-7));
  for (double r : {1e-3, 0.2, 7.0, 900.0}) {
    CHECK(p.value(r) == doctest::Approx(r).epsilon(1e-8));
    CHECK(p.slope(r) == doctest::Approx(1.0).epsilon(1e-7));
    // F = r^2 / 2d with d = N + 2A = 5.
    CHECK(p.F(r) == doctest::Approx(r * r / 10.0).epsilon(1e-6));
  }
  CHECK(p.weight_integral(2.0) == doctest::Approx(std::pow(2.0, 5) / 5.0).epsilon(1e-8));
}

TEST_CASE("interpolated profile against an adaptive Runge-Kutta integration") {
  const auto spec = PotentialSpec::interpolated(3, 0.0, 2.0, 2.0, 1.0);
  const auto setup = prepare(spec);
  // Near the origin V -> 2, so U = 1 + r^2/3 + O(r^4).
  const double r0 = 1e-4;
  const auto y = integrate_profile(spec, r0, 1.0 + r0 * r0 / 3.0, 2.0 * r0 / 3.0, 20.0);
  CHECK(setup.profile.value(20.0) == doctest::Approx(y[0]).epsilon(1e-6));
  CHECK(setup.profile.slope(20.0) == doctest::Approx(y[1]).epsilon(1e-6));
  CHECK(setup.fit.tail == TailType::RegularPower);
  CHECK(setup.exps.A == doctest::Approx(1.0));
  // U ~ c* r with a correction decaying like r^-2; U/r at 20 is already close.
  CHECK(setup.profile.c_star == doctest::Approx(y[0] / 20.0).epsilon(5e-3));
}

TEST_CASE("compact bump in the plane grows like log r with the exterior constants") {
  const auto spec = PotentialSpec::compact_bump(2, 1.0, 1.0);
  const auto setup = prepare(spec);
  CHECK(setup.fit.tail == TailType::LogGrowth);
  CHECK(setup.exps.classification == Classification::Sstar);
  // Outside the support U = U(1) + U'(1) log r exactly.
  const double r0 = 1e-4;
  const auto y = integrate_profile(spec, r0, 1.0 + r0 * r0 / 4.0, r0 / 2.0, 1.0);
  CHECK(setup.profile.c_star == doctest::Approx(y[1]).epsilon(1e-6));
  CHECK(setup.profile.tail_offset == doctest::Approx(y[0]).epsilon(1e-5));
  CHECK(setup.profile.value(50.0) == doctest::Approx(y[0] + y[1] * std::log(50.0)).epsilon(1e-7));
}

TEST_CASE("designer profile with a singular tail is case C") {
  const auto setup = prepare(designer_potential(HarmonicProfileSeed::power_transition(0.0, -1.0), 3));
  CHECK(setup.fit.tail == TailType::SingularPower);
  CHECK(setup.exps.classification == Classification::C);
  CHECK(setup.profile.c_star == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(setup.profile.value(3.0) == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-7));
  CHECK(setup.exps.d == doctest::Approx(1.0));
}

TEST_CASE("comparison functions") {
  CHECK(comparison_function(TailType::RegularPower, 3, 2.0, 4.0) == doctest::Approx(4.0));
  CHECK(comparison_function(TailType::SingularPower, 3, 2.0, 4.0) == doctest::Approx(1.0 / 16.0));
  CHECK(comparison_function(TailType::LogGrowth, 2, 0.0, std::exp(2.0)) == doctest::Approx(2.0));
}
