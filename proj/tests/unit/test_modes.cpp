#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heatlab/error.hpp"
#include "heatlab/modes.hpp"

using namespace heatlab;

namespace {

constexpr double pi = std::numbers::pi;

void check_orthonormal(int N, int kmax) {
  const auto q = SphereQuadrature::make(N, 32);
  std::vector<std::pair<int, int>> idx;
  for (int k = 0; k <= kmax; ++k)
    for (long i = 1; i <= sphere_eigenvalue(N, k).multiplicity; ++i) idx.emplace_back(k, int(i));
  double worst = 0.0;
  for (auto [k1, i1] : idx)
    for (auto [k2, i2] : idx) {
      double s = 0.0;
      for (std::size_t n = 0; n < q.nodes.size(); ++n)
        s += q.weights[n] * angular_harmonic(N, k1, i1, q.nodes[n]) *
             angular_harmonic(N, k2, i2, q.nodes[n]);
      worst = std::max(worst, std::abs(s - (k1 == k2 && i1 == i2 ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-12);
}

}  // namespace

TEST_CASE("harmonics are orthonormal under the sphere quadrature") {
  check_orthonormal(2, 4);
  check_orthonormal(3, 3);
  double area = 0.0;
  for (double w : SphereQuadrature::make(3, 16).weights) area += w;
  CHECK(area == doctest::Approx(4 * pi));
}

TEST_CASE("spherical harmonics match the textbook zonal forms") {
  const Direction dir{0.8, 2.1};
  const double c = std::cos(dir.theta);
  CHECK(angular_harmonic(3, 0, 1, dir) == doctest::Approx(1 / std::sqrt(4 * pi)));
  CHECK(angular_harmonic(3, 1, 2, dir) == doctest::Approx(std::sqrt(3 / (4 * pi)) * c));
  CHECK(angular_harmonic(3, 2, 3, dir) ==
        doctest::Approx(std::sqrt(5 / (16 * pi)) * (3 * c * c - 1)));
  CHECK(angular_harmonic(2, 2, 1, dir) == doctest::Approx(std::cos(2 * dir.theta) / std::sqrt(pi)));
  CHECK(angular_harmonic(2, 2, 2, dir) == doctest::Approx(std::sin(2 * dir.theta) / std::sqrt(pi)));
}

TEST_CASE("mixed dipole data decompose into two entries with exact coefficients") {
  const auto ex = decompose(mixed_dipole_data(), 2, 4);
  REQUIRE(ex.entries.size() == 2);
  CHECK(ex.parseval_defect() < 1e-10);
  for (const auto& e : ex.entries) {
    for (double r : {0.3, 1.7, 4.0}) {
      const double g = std::exp(-r * r / 4);
      // e^{-r^2/4} = sqrt(2 pi) g Q_0 and (r/2) g cos = (sqrt(pi)/2) r g Q_{1,1}.
      const double expected = e.k == 0 ? std::sqrt(2 * pi) * g : 0.5 * std::sqrt(pi) * r * g;
      CHECK(e.coefficient(r) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
  const Direction dir{1.2, 0.0};
  const auto phi = mixed_dipole_data();
  CHECK(ex.assemble(2.0, dir) == doctest::Approx(phi(2.0, dir)).epsilon(1e-12));
  CHECK(ex.top_fraction < 0.1);
}

TEST_CASE("heavy high orders trigger the truncation warning") {
  take_warnings();
  set_warnings_enabled(false);
  const AngularData f = [](double r, const Direction& d) {
    return std::exp(-r * r / 4) * (1 + std::cos(d.theta) + std::cos(2 * d.theta));
  };
  const auto ex = decompose(f, 2, 4);
  set_warnings_enabled(true);
  CHECK(ex.top_fraction > 0.1);
  const auto w = take_warnings();
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("TruncationWarning") != std::string::npos);
}

TEST_CASE("free N=2 mass of the mixed data is one") {
  const auto ex = decompose(mixed_dipole_data(), 2, 2);
  CHECK(mass_M(ex, prepare(PotentialSpec::free(2))) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("decompose then evolve commutes with evolve then decompose") {
  const auto ex = decompose(mixed_dipole_data(), 2, 2);
  Schedule sched;
  sched.s_end = 2.0;
  sched.ds = 2.5e-4;
  ModeRunOptions opts;
  opts.run.h = 0.001;
  opts.fit_from = 1.0;
  const auto ev = evolve_modes(ex, PotentialSpec::free(2), sched, opts);
  const auto rep = commutation_check(ev, ex, 2.0);
  CHECK(rep.relative < 1e-6);
  // The k = 1 mode of free N=2 data is the Hardy flow with lambda = 1, A = 1.
  for (const auto& m : ev.modes) CHECK(m.expected_decay == doctest::Approx(2.0 + m.k));
}
