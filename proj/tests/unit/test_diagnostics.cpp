#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "heatlab/diagnostics.hpp"

using namespace heatlab;

TEST_CASE("Richardson limit is exact for quadratics in x") {
  std::vector<double> x = {0.5, 0.25, 0.125, 0.1}, y;
  for (double v : x) y.push_back(3.0 - 2.0 * v + 7.0 * v * v);
  CHECK(richardson_limit(x, y) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS(richardson_limit({1.0, 2.0}, {1.0, 2.0}));
}

TEST_CASE("radial kernel against elementary closed forms") {
  const double t = 0.7;
  for (auto [r, rho] : {std::pair{0.3, 1.1}, std::pair{2.0, 1.5}, std::pair{0.0, 0.8}}) {
    const double z = r * rho / (2 * t);
    const double gauss = std::exp(-(r * r + rho * rho) / (4 * t));
    // Free N=3: angular average (4 pi t)^{-3/2} e^{..} sinh(z)/z.
    const double sinhc = z > 0 ? std::sinh(z) / z : 1.0;
    CHECK(hardy_radial_kernel(3, 0.0, r, rho, t) ==
          doctest::Approx(std::pow(4 * std::numbers::pi * t, -1.5) * gauss * sinhc)
              .epsilon(1e-10));
    // Free plane: (4 pi t)^{-1} e^{..} I_0(z).
    CHECK(hardy_radial_kernel(2, 0.0, r, rho, t) ==
          doctest::Approx(gauss * boost::math::cyl_bessel_i(0, z) / (4 * std::numbers::pi * t)).epsilon(1e-10));
    if (z > 0) {
      // Hardy N=3, lambda=2: nu = 3/2 and I_{3/2}(z) = sqrt(2/(pi z)) (cosh z - sinh z / z).
      const double i32 = std::sqrt(2 / (std::numbers::pi * z)) * (std::cosh(z) - std::sinh(z) / z);
      CHECK(hardy_radial_kernel(3, 2.0, r, rho, t) ==
            doctest::Approx(std::pow(r * rho, -0.5) / (8 * std::numbers::pi * t) * gauss * i32).epsilon(1e-9));
    }
  }
}

TEST_CASE("radial kernel integrates to one in free space") {
  // |S^{N-1}| int_0^inf p(r, rho, t) rho^{N-1} d rho = 1 for the free flow.
  const double t = 0.4, r = 0.9;
  double sum = 0.0;
  const double h = 1e-3;
  for (double rho = 0.5 * h; rho < 12.0; rho += h)
    sum += hardy_radial_kernel(3, 0.0, r, rho, t) * rho * rho * h;
  CHECK(4 * std::numbers::pi * sum == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("exact self-similar checkpoints have zero error") {
  const auto setup = prepare(PotentialSpec::hardy(3, 2.0));
  const auto grid = EvolutionGrid::build(setup.profile, 60.0);
  const double t = 1.5, d = setup.exps.d;
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = std::pow(1 + t, -0.5 * d) * std::exp(-grid.r[i] * grid.r[i] / (4 * (1 + t)));
  Checkpoint c;
  c.t = t;
  c.s = std::log1p(t);
  c.star = RadialField::at_time(Gauge::Star, grid.r, v, t);
  CHECK(selfsimilar_exact_error(c, grid, d) < 1e-14);
  c.star.values[10] *= 1.01;
  CHECK(selfsimilar_exact_error(c, grid, d) > 1e-6);
}

TEST_CASE("Hardy bump run satisfies the case S limits and the envelope") {
  const auto setup = prepare(PotentialSpec::hardy(3, 2.0));
  const auto frame = SelfSimilarFrame::make(setup.exps.d, 3);
  Schedule sched;
  sched.s_end = 6.0;
  const auto res = run(setup, InitialData::bump(), sched, frame);
  const auto mf = m_of_phi(InitialData::bump(), setup, &res.grid);
  const auto L = theorem_limits(res.trace, setup, mf.m);
  CHECK_FALSE(L.rate_mode);
  CHECK(L.profile_relative_error < 0.02);
  CHECK(L.center_ratio == doctest::Approx(1.0).epsilon(0.02));
  CHECK(L.norm_bounded);

  const auto E = supersolution_envelope(res.trace, res.grid, setup, 0.25 * setup.exps.d, 0.0);
  CHECK(E.min_residual >= -1e-6);
  CHECK(E.discrete_F_deviation < 1e-4);
  CHECK(E.min_ratio > 1.9);
  CHECK(E.max_ratio <= 2.0 + 1e-12);
  CHECK(E.fitted_exponent == doctest::Approx(-E.gamma).epsilon(0.05));
}
