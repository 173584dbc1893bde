#include <doctest.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "heatlab/error.hpp"
#include "heatlab/evolve.hpp"

using namespace heatlab;

namespace {

struct Run {
  HarmonicSetup setup;
  SelfSimilarFrame frame;
  RunResult result;
};

Run short_run(const PotentialSpec& spec, InitialData data, double s_end) {
  Run r{prepare(spec), {}, {}};
  r.frame = SelfSimilarFrame::make(r.setup.exps.d, 2);
  Schedule sched;
  sched.s_end = s_end;
  r.result = run(r.setup, data, sched, r.frame);
  return r;
}

// Free heat flow in R^N of (1 + r^2/2) e^{-r^2/2}: with q = 1 + 2t, differentiate
// the Gaussian solution q^{-N/2} e^{-a r^2 / (1 + 4at)} in a at a = 1/2.
double free_bump_exact(int N, double r, double t) {
  const double q = 1.0 + 2.0 * t;
  return std::pow(q, -0.5 * N) * std::exp(-r * r / (2.0 * q)) *
         (1.0 + 0.5 * (2.0 * N * t / q + r * r / (q * q)));
}

double sup_relative(const Checkpoint& c, const EvolutionGrid& g, auto exact) {
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double e = exact(g.r[i]);
    err = std::max(err, std::abs(c.star.values[i] - e));
    scale = std::max(scale, std::abs(e));
  }
  return err / scale;
}

}  // namespace

TEST_CASE("free N=3 bump data against the closed-form heat flow") {
  const auto R = short_run(PotentialSpec::free(3), InitialData::bump(), 1.0);
  const auto& c = R.result.trace.at(1.0);
  CHECK(sup_relative(c, R.result.grid, [&](double r) { return free_bump_exact(3, r, c.t); }) < 1e-4);
  CHECK(R.result.trace.max_mass_drift < 1e-12);
  CHECK(R.result.trace.min_relative_value > -1e-10);
}

TEST_CASE("Hardy self-similar data stays on the exact solution and a(s) = m") {
  const auto R = short_run(PotentialSpec::hardy(3, 2.0), InitialData::self_similar(), 1.0);
  const auto& c = R.result.trace.at(1.0);
  const double d = R.setup.exps.d;
  CHECK(sup_relative(c, R.result.grid, [&](double r) {
          return std::pow(1.0 + c.t, -0.5 * d) * std::exp(-r * r / (4.0 * (1.0 + c.t)));
        }) < 1e-4);
  const auto mf = m_of_phi(InitialData::self_similar(), R.setup, &R.result.grid);
  CHECK(c.a == doctest::Approx(mf.m).epsilon(1e-3));
  // Grid masses are a second-order quadrature of the same integral.
  CHECK(std::abs(mf.m - mf.m_discrete) < 1e-4 * std::abs(mf.m));
  // The weighted norm of m psi_0 is |m|.
  CHECK(c.w_norm == doctest::Approx(std::abs(mf.m)).epsilon(1e-3));
}

TEST_CASE("mass functionals against Gaussian moments") {
  const auto setup = prepare(PotentialSpec::free(3));
  // int (1 + r^2/2) e^{-r^2/2} r^2 dr = sqrt(pi/2) (1 + 3/2).
  const auto mf = m_of_phi(InitialData::bump(), setup);
  CHECK(mf.integral == doctest::Approx(2.5 * std::sqrt(0.5 * std::numbers::pi)).epsilon(1e-10));
  // In free space M is the total integral over (4 pi)^{N/2}.
  CHECK(mf.M == doctest::Approx(4 * std::numbers::pi * mf.integral /
                                std::pow(4 * std::numbers::pi, 1.5)).epsilon(1e-12));
}

TEST_CASE("single steps conserve the weighted mass") {
  const auto setup = prepare(PotentialSpec::interpolated(3, 0.0, 2.0, 2.0, 1.0));
  const auto grid = EvolutionGrid::build(setup.profile, 200.0);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(-grid.r[i]) * (1 + std::sin(grid.r[i]));
  auto f = RadialField::at_time(Gauge::Star, grid.r, v, 0.0);
  const double m0 = grid.weighted_mass(v);
  for (auto scheme : {TimeScheme::CrankNicolson, TimeScheme::BackwardEuler}) {
    auto g = step(f, grid, 0.05, scheme);
    CHECK(grid.weighted_mass(g.values) == doctest::Approx(m0).epsilon(1e-13));
    CHECK(g.t == doctest::Approx(0.05));
  }
  // The discrete derivative has zero weighted sum.
  const auto dt = time_derivative(grid, v);
  CHECK(std::abs(grid.weighted_mass(dt)) < 1e-12 * grid.weighted_mass(v));
}

TEST_CASE("zero-mass data have vanishing discrete mass and rings have unit mass") {
  const auto setup = prepare(PotentialSpec::hardy(3, 2.0));
  const auto grid = EvolutionGrid::build(setup.profile, 100.0);
  const auto z = InitialData::zero_mass(grid);
  std::vector<double> v(grid.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = z.star(grid.r[i]);
    scale += grid.mass[i] * std::abs(v[i]);
  }
  CHECK(std::abs(grid.weighted_mass(v)) < 1e-12 * scale);

  const auto ring = InitialData::ring(setup.profile, 1.0, 0.04);
  const double total = 4 * std::numbers::pi *
                       boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                           [&](double r) { return ring.star(r) * setup.profile.value(r) * r * r; },
                           0.0, 3.0, 10, 1e-12);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("center value and checkpoint lookup") {
  const auto setup = prepare(PotentialSpec::free(2));
  const auto grid = EvolutionGrid::build(setup.profile, 50.0);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 3.0 - grid.r[i] * grid.r[i];
  CHECK(center_value(grid, v) == doctest::Approx(3.0).epsilon(1e-12));

  const auto R = short_run(PotentialSpec::free(2), InitialData::bump(), 0.5);
  CHECK(R.result.trace.at(0.25).s == doctest::Approx(0.25));
  CHECK_THROWS_AS(R.result.trace.at(0.3), Error);
}
