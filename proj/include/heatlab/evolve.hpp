#pragma once

#include <functional>
#include <string>
#include <vector>

#include "heatlab/field.hpp"
#include "heatlab/harmonic.hpp"
#include "heatlab/spectral.hpp"

namespace heatlab {

/// Finite-volume grid for the star-gauge equation
///   u*_t = (r^{N-1} U^2)^{-1} (r^{N-1} U^2 u*_r)_r.
/// Faces follow r = r_c (e^{j h} - 1): uniform near the origin, geometric far out.
struct EvolutionGrid {
  int N = 2;
  std::vector<double> faces;
  std::vector<double> r;      // nodes at mapped cell midpoints
  std::vector<double> mass;   // int_cell r^{N-1} U^2 dr
  std::vector<double> trans;  // 1 / int_{r_i}^{r_{i+1}} dr / (r^{N-1} U^2), size n-1
  std::vector<double> U;      // U at the nodes

  std::size_t size() const { return r.size(); }
  double r_max() const { return faces.back(); }
  double weighted_mass(const std::vector<double>& star) const;

  static EvolutionGrid build(const HarmonicProfile& profile, double r_max, double h = 0.0035,
                             double r_c = 1.0);
};

enum class TimeScheme { CrankNicolson, BackwardEuler };

/// One implicit step of the flux-form discretization; zero flux at both ends.
RadialField step(const RadialField& field, const EvolutionGrid& grid, double dt,
                 TimeScheme scheme = TimeScheme::CrankNicolson);

/// Discrete operator applied to u*: the right-hand side -(K u*)/m.
std::vector<double> time_derivative(const EvolutionGrid& grid, const std::vector<double>& star);

/// Value at r = 0 by extrapolation in r^2 through the three innermost nodes.
double center_value(const EvolutionGrid& grid, const std::vector<double>& values);

/// Initial data given in the star gauge, phi = U phi*.
struct InitialData {
  std::function<double(double)> star;
  std::string label;
  double support = 40.0;  // radius beyond which phi* is negligible

  /// phi* = exp(-r^2/4): exact self-similar data for pure power profiles.
  static InitialData self_similar();
  /// phi* = (1 + r^2/2) exp(-r^2/2).
  static InitialData bump();
  /// exp(-r^2/2) - c exp(-r^2) with c chosen so the discrete mass vanishes.
  static InitialData zero_mass(const EvolutionGrid& grid);
  /// Unit-mass ring of width sqrt(tau) at radius y, in the U gauge.
  static InitialData ring(const HarmonicProfile& profile, double y, double tau);
};

struct Schedule {
  double ds = 1e-3;
  double s_end = 8.0;
  double checkpoint_every = 0.25;
  int startup_steps = 0;  // backward-Euler half steps before Crank-Nicolson
  std::vector<double> extra_checkpoints;
};

/// The self-similar frame: xi grid and eigenvectors of the weighted operator.
struct SelfSimilarFrame {
  double d = 0.0;
  EigenDecomposition eig;
  double xi_min() const { return eig.xi.front(); }
  double xi_max() const { return eig.xi.back(); }

  static SelfSimilarFrame make(double d, int count = 3, SpectralGrid grid = {});
};

/// Resamples u*(., t) to w(xi, s) = (1+t)^{d/2} U_d(r) u*(r, t), r = xi sqrt(1+t).
RadialField to_selfsim(const RadialField& star, const EvolutionGrid& grid,
                       const HarmonicProfile& profile, const ExponentData& exps,
                       const std::vector<double>& xi);

/// a(s) = sum_i m_i w_i psi_i on the xi grid.
double project_a(const RadialField& w, const SelfSimilarFrame& frame);
double weighted_norm(const RadialField& w, const SelfSimilarFrame& frame);

struct Checkpoint {
  double s = 0.0, t = 0.0;
  RadialField star;
  std::vector<double> star_dt;
  double center = 0.0;     // u*(0, t)
  double center_dt = 0.0;  // d/dt u*(0, t)
  double mass = 0.0;
  RadialField w;
  double a = 0.0;
  double w_norm = 0.0;
};

struct DiagnosticsTrace {
  std::vector<Checkpoint> points;
  double initial_mass = 0.0;
  double max_mass_drift = 0.0;     // max drift over the run, relative to sum m_i |u*_i(0)|
  double max_step_drift = 0.0;     // max relative drift in one step
  double min_relative_value = 0.0; // min u* / max u* over the run

  const Checkpoint& at(double s, double tolerance = 1e-6) const;
};

struct RunOptions {
  double r_max = 0.0;  // 0: chosen from the frame and s_end
  double h = 0.0035;
  double r_c = 1.0;
  TimeScheme scheme = TimeScheme::CrankNicolson;
  bool keep_selfsim = true;
  // Take the step landing on each checkpoint as two backward-Euler half steps,
  // which damps the stiff components Crank-Nicolson leaves undamped.
  bool smooth_checkpoints = true;
};

struct RunResult {
  EvolutionGrid grid;
  DiagnosticsTrace trace;
};

RunResult run(const HarmonicSetup& setup, const InitialData& data, const Schedule& schedule,
              const SelfSimilarFrame& frame, const RunOptions& options = {});

struct MassFunctionals {
  double m = 0.0;           // (c_d / c*) int phi U r^{N-1} dr
  double M = 0.0;           // |S^{N-1}| / (c* kappa) int phi U r^{N-1} dr
  double integral = 0.0;    // int phi U r^{N-1} dr
  double m_discrete = 0.0;  // same with the grid masses
};

MassFunctionals m_of_phi(const InitialData& data, const HarmonicSetup& setup,
                         const EvolutionGrid* grid = nullptr);

/// Checkpoint fields as CSV: r, value, gauge, stamp.
std::string field_csv(const RadialField& field);

}  // namespace heatlab
