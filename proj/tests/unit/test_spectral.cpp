#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/laguerre.hpp>
#include <cmath>
#include <random>

#include "heatlab/spectral.hpp"

using namespace heatlab;

TEST_CASE("hermite normalization is unit in the rho-weighted norm") {
  // int_0^inf xi^{d-1} e^{xi^2/4} (c_d e^{-xi^2/4})^2 = c_d^2 2^{d-1} Gamma(d/2).
  for (double d : {0.8, 2.0, 5.0})
    CHECK(hermite_normalization(d) * hermite_normalization(d) * std::pow(2.0, d - 1) *
              std::tgamma(0.5 * d) ==
          doctest::Approx(1.0));
}

TEST_CASE("discrete operator is self-adjoint in the mass inner product") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  for (auto boundary : {BoundaryKind::NaturalH1, BoundaryKind::DirichletH10}) {
    const auto op = assemble(3.0, boundary, SpectralGrid{12.0, 300});
    std::vector<double> u(op.size()), v(op.size());
    for (auto& x : u) x = g(rng);
    for (auto& x : v) x = g(rng);
    CHECK(op.inner(u, op.apply(v)) == doctest::Approx(op.inner(op.apply(u), v)).epsilon(1e-10));
  }
}

TEST_CASE("iterative eigensolver against a dense Eigen solve of the same matrix") {
  const auto op = assemble(2.0, BoundaryKind::NaturalH1, SpectralGrid{12.0, 200});
  const std::size_t n = op.size();
  // Symmetrize with M^{1/2}: S = M^{1/2} L M^{-1/2}.
  Eigen::MatrixXd S(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0 / std::sqrt(op.mass[j]);
    const auto col = op.apply(e);
    for (std::size_t i = 0; i < n; ++i) S(i, j) = std::sqrt(op.mass[i]) * col[i];
    e[j] = 0.0;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(0.5 * (S + S.transpose()));
  const auto eig = eigensolve(op, 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(eig.eigenvalues[k] == doctest::Approx(dense.eigenvalues()[k]).epsilon(1e-9));
    CHECK(eig.residuals[k] < 1e-8);
  }
}

TEST_CASE("eigenvalues are the integers and eigenvectors are Laguerre functions") {
  // d = 4: psi_k proportional to L_k^{(1)}(xi^2/4) e^{-xi^2/4}.
  const auto eig = eigensolve(assemble(4.0, BoundaryKind::NaturalH1), 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(eig.eigenvalues[k] == doctest::Approx(k).epsilon(1e-4).scale(1.0));
    std::vector<double> ref(eig.xi.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const double z = 0.25 * eig.xi[i] * eig.xi[i];
      ref[i] = boost::math::laguerre(k, 1, z) * std::exp(-z);
    }
    double nrm = 0.0, dot = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      nrm += eig.mass[i] * ref[i] * ref[i];
      dot += eig.mass[i] * ref[i] * eig.vectors[k][i];
    }
    const double scale = dot / nrm;
    double err = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i)
      err = std::max(err, std::abs(eig.vectors[k][i] - scale * ref[i]));
    CHECK(err < 1e-4);
    CHECK(std::abs(scale) * std::sqrt(nrm) == doctest::Approx(1.0).epsilon(1e-6));
  }
  const auto h = hermite_check(eig);
  CHECK(h.psi0_sup_deviation < 1e-4);
  CHECK(h.max_eigenvalue_deviation < 1e-4);
}

TEST_CASE("Dirichlet ground state for d < 2 is 1 - d/2") {
  for (double d : {0.5, 0.8, 1.5}) {
    const auto eig = eigensolve(assemble(d, BoundaryKind::DirichletH10), 2);
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0 - 0.5 * d).epsilon(1e-3).scale(1.0));
    CHECK(eig.gaps[0] == doctest::Approx(1.0).epsilon(2e-3));
  }
}

TEST_CASE("second-order convergence under one refinement") {
  const auto orders = convergence_orders(3.0, BoundaryKind::NaturalH1, {0, 1, 2, 3},
                                         SpectralGrid{12.0, 1000});
  for (std::size_t k = 1; k < orders.size(); ++k) CHECK(orders[k] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("projection onto an eigenvector keeps it and annihilates the others") {
  const auto eig = eigensolve(assemble(3.0, BoundaryKind::NaturalH1, SpectralGrid{12.0, 800}), 3);
  const auto& v = eig.vectors[1];
  const auto same = eig.project(v, 1);
  const auto other = eig.project(v, 2);
  double d_same = 0.0, d_other = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    d_same = std::max(d_same, std::abs(same[i] - v[i]));
    d_other = std::max(d_other, std::abs(other[i]));
  }
  CHECK(d_same < 1e-10);
  CHECK(d_other < 1e-10);
}
