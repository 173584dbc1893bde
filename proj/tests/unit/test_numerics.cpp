#include <doctest.h>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "heatlab/numerics.hpp"

using namespace heatlab;

TEST_CASE("Gauss-Legendre rule integrates polynomials of degree 2n-1 exactly") {
  for (int n : {2, 5, 8, 16}) {
    const auto rule = num::gauss_legendre(n);
    double weight_sum = 0.0;
    for (double w : rule.weights) weight_sum += w;
    CHECK(weight_sum == doctest::Approx(2.0).epsilon(1e-14));
    const int deg = 2 * n - 2;  // even, so the integral over [-1,1] is 2/(deg+1)
    double q = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      q += rule.weights[i] * std::pow(rule.nodes[i], deg);
    CHECK(q == doctest::Approx(2.0 / (deg + 1)).epsilon(1e-13));
  }
}

TEST_CASE("composite quadrature agrees with Gauss-Kronrod") {
  auto f = [](double x) { return std::exp(-x * x) * std::cos(3 * x); };
  const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 4.0);
  CHECK(num::integrate(f, 0.0, 4.0, 16) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("log quadrature handles integrable singularities and long ranges") {
  // int_0^inf r^{1/2} e^{-r} dr = Gamma(3/2), truncated far enough to be exact in double.
  auto g = [](double r) { return std::sqrt(r) * std::exp(-r); };
  CHECK(num::integrate_log(g, 1e-14, 60.0, 24) ==
        doctest::Approx(std::tgamma(1.5)).epsilon(1e-9));
  CHECK(num::integrate_log([](double r) { return 1.0 / r; }, 1e-3, 1e5) ==
        doctest::Approx(8.0 * std::numbers::ln10).epsilon(1e-13));
}

TEST_CASE("tridiagonal solve against a dense LU solve") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 40;
  std::vector<double> lo(n), di(n), up(n), rhs(n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    lo[i] = i > 0 ? u(rng) : 0.0;
    up[i] = i < n - 1 ? u(rng) : 0.0;
    di[i] = 3.0 + u(rng);
    rhs[i] = b[i] = u(rng);
    A(i, i) = di[i];
    if (i > 0) A(i, i - 1) = lo[i];
    if (i < n - 1) A(i, i + 1) = up[i];
  }
  REQUIRE(num::solve_tridiagonal(lo, di, up, rhs));
  const Eigen::VectorXd x = A.partialPivLu().solve(b);
  for (int i = 0; i < n; ++i) CHECK(rhs[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("tridiagonal solve reports a zero pivot") {
  std::vector<double> lo = {0, 1}, di = {0, 1}, up = {1, 0}, rhs = {1, 1};
  CHECK_FALSE(num::solve_tridiagonal(lo, di, up, rhs));
}

TEST_CASE("line and least-squares fits recover exact coefficients") {
  std::vector<double> x, y, c0, c1, c2;
  for (int i = 0; i < 10; ++i) {
    x.push_back(0.3 * i);
    y.push_back(1.5 - 2.0 * x.back() + 0.25 * x.back() * x.back());
    c0.push_back(1.0);
    c1.push_back(x.back());
    c2.push_back(x.back() * x.back());
  }
  const auto c = num::least_squares({c0, c1, c2}, y);
  CHECK(c[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(c[1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(c[2] == doctest::Approx(0.25).epsilon(1e-12));

  std::vector<double> ly;
  for (double v : x) ly.push_back(4.0 - 0.5 * v);
  const auto fit = num::fit_line(x, ly);
  CHECK(fit.slope == doctest::Approx(-0.5));
  CHECK(fit.intercept == doctest::Approx(4.0));
  CHECK(fit.rms_residual < 1e-12);
}

TEST_CASE("extrapolation in r^2 is exact for quadratics in r^2") {
  std::vector<double> r = {0.1, 0.2, 0.35}, f;
  for (double v : r) f.push_back(2.0 - 3.0 * v * v + 0.5 * std::pow(v, 4));
  CHECK(num::extrapolate_to_origin(r, f) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("monotone cubic keeps monotone data monotone and interpolates nodes") {
  std::vector<double> x = {0, 1, 2, 3, 4, 5}, y = {0, 0.1, 0.2, 5, 5.1, 9};
  const num::MonotoneCubic f(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(f(x[i]) == doctest::Approx(y[i]));
  double prev = f(0.0);
  for (double t = 0.01; t <= 5.0; t += 0.01) {
    const double v = f(t);
    CHECK(v >= prev - 1e-14);
    prev = v;
  }
}
