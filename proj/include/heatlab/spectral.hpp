#pragma once

#include <string>
#include <vector>

namespace heatlab {

enum class BoundaryKind { NaturalH1, DirichletH10 };

std::string to_string(BoundaryKind kind);

struct SpectralGrid {
  double xi_max = 12.0;
  int cells = 4000;          // cells of the uniform part
  double first_face = 1e-4;  // first cell width when graded
  double ratio = 1.05;       // geometric growth of graded cells
  bool graded = false;       // forced on for d < 2 and for Dirichlet
};

/// Cell-centred finite-volume form of
///   L_d w = -rho^{-1} (rho w')' - (d/2) w,   rho(xi) = xi^{d-1} e^{xi^2/4}.
/// The discrete operator is M^{-1} K - d/2 with K symmetric, so it is
/// self-adjoint in the mass-weighted inner product sum_i m_i u_i v_i.
struct WeightedOperator {
  double d = 0.0;
  BoundaryKind boundary = BoundaryKind::NaturalH1;
  std::vector<double> faces;  // cell boundaries, faces.front() = 0
  std::vector<double> xi;     // cell nodes
  std::vector<double> mass;   // int_cell rho
  std::vector<double> trans;  // inter-node conductances, size n-1
  double trans_origin = 0.0;  // ghost conductance to w = 0 at xi = 0
  double trans_outer = 0.0;   // ghost conductance to w = 0 at xi_max

  std::size_t size() const { return xi.size(); }
  std::vector<double> apply(const std::vector<double>& w) const;
  double inner(const std::vector<double>& u, const std::vector<double>& v) const;
};

WeightedOperator assemble(double d, BoundaryKind boundary, SpectralGrid grid = {});

struct EigenDecomposition {
  double d = 0.0;
  BoundaryKind boundary = BoundaryKind::NaturalH1;
  std::vector<double> xi;
  std::vector<double> mass;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> vectors;  // sum_i m_i v_i^2 = 1, positive near 0
  std::vector<double> residuals;             // ||L v - mu v|| in the weighted norm
  std::vector<double> gaps;                  // mu_{i+1} - mu_i

  std::vector<double> project(const std::vector<double>& w, std::size_t k) const;
};

EigenDecomposition eigensolve(const WeightedOperator& op, int count, int max_iterations = 60);

/// c_d = [2^{d-1} Gamma(d/2)]^{-1/2}.
double hermite_normalization(double d);

struct HermiteReport {
  double psi0_sup_deviation = 0.0;  // sup |v0 - c_d e^{-xi^2/4}|
  std::vector<double> eigenvalue_deviation;  // |mu_i - i|
  double max_eigenvalue_deviation = 0.0;
};

HermiteReport hermite_check(const EigenDecomposition& decomp);

/// Observed order of convergence of the eigenvalues toward `exact` under one
/// doubling of `coarse`.
std::vector<double> convergence_orders(double d, BoundaryKind boundary,
                                       const std::vector<double>& exact, SpectralGrid coarse);

std::string decomposition_csv(const EigenDecomposition& decomp);

}  // namespace heatlab
