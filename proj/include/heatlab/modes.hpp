#pragma once

#include <functional>
#include <string>
#include <vector>

#include "heatlab/diagnostics.hpp"
#include "heatlab/evolve.hpp"

namespace heatlab {

/// A point of the unit sphere: the polar angle for N = 2, (polar, azimuth) for N = 3.
struct Direction {
  double theta = 0.0;
  double azimuth = 0.0;
};

using AngularData = std::function<double(double r, const Direction&)>;

/// Real orthonormal harmonic Q_{k,i} on S^{N-1}, i = 1..multiplicity(k).
double angular_harmonic(int N, int k, int i, const Direction& dir);

/// Quadrature on S^{N-1}: trapezoid in theta for N = 2; Gauss-Legendre in
/// cos(theta) times trapezoid in azimuth for N = 3.
struct SphereQuadrature {
  int N = 2;
  std::vector<Direction> nodes;
  std::vector<double> weights;

  static SphereQuadrature make(int N, int order);
};

struct ModeEntry {
  int k = 0;
  int i = 1;
  std::function<double(double)> coefficient;  // phi^{k,i}(r)
  std::vector<double> values;                 // coefficient on the expansion's radial grid
  double energy = 0.0;                        // int |phi^{k,i}|^2 r^{N-1} dr
};

struct ModeExpansion {
  int N = 2;
  int truncation = 4;  // modes k < truncation are kept
  std::vector<double> r;
  std::vector<ModeEntry> entries;
  double total_energy = 0.0;     // int |phi|^2 dx by direct quadrature
  double retained_energy = 0.0;  // sum of entry energies
  double top_fraction = 0.0;     // energy of the two highest kept k, over the total

  double parseval_defect() const;
  /// Sum over the entries of phi^{k,i}(r) Q_{k,i}(dir).
  double assemble(double r, const Direction& dir) const;
  std::string csv() const;
};

/// Projects phi onto the harmonics with k < truncation. Warns when the two
/// highest kept orders carry more than 10% of the energy.
ModeExpansion decompose(const AngularData& phi, int N, int truncation, std::vector<double> r = {},
                        int angular_order = 0);

struct ModeRun {
  int k = 0;
  int i = 1;
  HarmonicSetup setup;
  SelfSimilarFrame frame;
  RunResult result;
  double decay_exponent = 0.0;  // of sup_r |u_{k,i}(r, t)| in powers of sqrt(t)
  double expected_decay = 0.0;  // N + A+(lambda_2 + omega_k)

  /// u_{k,i}(r, t) = U_k(r) u*_{k,i}(r, t) at checkpoint `index`.
  double value(std::size_t index, double r) const;
};

struct ModeEvolution {
  int N = 2;
  std::vector<ModeRun> modes;
  std::vector<double> s;  // checkpoint times shared by all modes

  std::size_t checkpoint(double s_value) const;
  double assemble(std::size_t index, double r, const Direction& dir) const;
};

struct ModeRunOptions {
  double fit_from = 4.0;  // decay exponents use checkpoints with s >= fit_from
  RunOptions run;
};

/// Evolves every entry under its shifted potential and records decay exponents.
ModeEvolution evolve_modes(const ModeExpansion& expansion, const PotentialSpec& base,
                           const Schedule& schedule, const ModeRunOptions& options = {});

struct RemainderReport {
  int m = 1;
  double d_m = 0.0;
  double expected_exponent = 0.0;  // d_m / 4
  double fitted_exponent = 0.0;    // of ||u_m(t)||_{L^2}
  bool vanishes = false;           // no modes with k >= m
};

RemainderReport remainder_bound(const ModeEvolution& evolution, const PotentialSpec& base, int m,
                                double fit_from = 4.0);

struct ProfileCheck {
  double M = 0.0;
  double A = 0.0;
  double s = 0.0;
  double sup_error = 0.0;       // sup |t^{(N+A)/2} u(sqrt(t) y) - M |y|^A e^{-|y|^2/4}|
  double relative_error = 0.0;  // over M sup_y |y|^A e^{-|y|^2/4}
};

/// Compares the assembled solution at s with its self-similar limit over
/// y_lo <= |y| <= y_hi.
ProfileCheck mode_profile_check(const ModeEvolution& evolution, const ModeExpansion& expansion,
                                double s, double y_lo = 0.2, double y_hi = 4.0);

/// M(phi) of the angular average of phi.
double mass_M(const ModeExpansion& expansion, const HarmonicSetup& radial);

/// Mixed radial plus cos(theta) data used by the mode checks:
/// e^{-r^2/4} + (1/2) r e^{-r^2/4} cos(theta).
AngularData mixed_dipole_data();

/// Free-space solution of the heat equation on R^2 for `mixed_dipole_data`.
double mixed_dipole_exact(double r, double theta, double t);

struct CommutationReport {
  double s = 0.0;
  double max_difference = 0.0;  // sup over the radial grid and entries
  double scale = 0.0;           // sup of the exact coefficients
  double relative = 0.0;
};

/// Decompose-then-evolve against evolve-then-decompose for the free N = 2
/// flow of `mixed_dipole_data`, the free evolution taken in closed form.
/// Compared at the evolution grid nodes with r <= r_hi.
CommutationReport commutation_check(const ModeEvolution& evolution, const ModeExpansion& expansion,
                                    double s, double r_hi = 10.0);

}  // namespace heatlab
