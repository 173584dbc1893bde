#pragma once

#include <vector>

#include "heatlab/evolve.hpp"

namespace heatlab {

struct LimitReport {
  Classification classification = Classification::S;
  bool rate_mode = false;  // m(phi) ~ 0: the decay rate of ||w|| is reported instead
  double m = 0.0;
  double s_end = 0.0;
  // Profile limit: sup over the xi window of |W - expected| against `profile_scale`.
  double profile_sup_error = 0.0;
  double profile_scale = 0.0;
  double profile_relative_error = 0.0;
  // Center limits, as ratios measured / expected.
  double center_ratio = 0.0;
  double center_dt_ratio = 0.0;
  double a_end = 0.0;
  double a_error = 0.0;  // |a(s_end) - m|
  double decay_rate = 0.0;
  bool norm_bounded = true;  // running sup of ||w|| does not grow after s = 2
  double norm_growth_constant = 0.0;  // sup ||w(s)|| / ||w(0)||
  bool a_monotone = true;             // |a(s) - m| nonincreasing beyond s = 4
};

struct LimitOptions {
  double xi_lo = 0.2;
  double xi_hi = 5.0;
  double rate_window_lo = 3.0;
  std::vector<double> richardson_s;  // S*: checkpoints used by the 1/s fit
  double zero_mass_threshold = 1e-8;
};

/// Compares the trace with the limits of the self-similar theory for the
/// run's classification.
LimitReport theorem_limits(const DiagnosticsTrace& trace, const HarmonicSetup& setup, double m,
                           const LimitOptions& options = {});

/// Value at 1/x -> 0 of the least-squares fit y = a + b x + c x^2.
double richardson_limit(const std::vector<double>& x, const std::vector<double>& y);

struct GdReport {
  double alpha = 0.0, beta = 0.0;  // |G| ~ C t^alpha r^beta
  double alpha_expected = 0.0, beta_expected = 4.0;
  double log_c = 0.0;
  double rms = 0.0;
  double beta_d1 = 0.0, beta_d2 = 0.0;  // r-exponents of the first two differences
  std::size_t samples = 0;
};

/// Fits the scaling of G_d = u* - [u*(0) + d/dt u*(0) F_d] at the given times
/// over r in [r_lo sqrt(t_0), r_hi sqrt(t_0)], t_0 the smallest time.
GdReport g_d_check(const DiagnosticsTrace& trace, const EvolutionGrid& grid,
                   const HarmonicSetup& setup, const std::vector<double>& times, double r_lo = 0.1,
                   double r_hi = 0.3);

struct EnvelopeReport {
  double gamma = 0.0;            // envelope decay exponent D + d/4
  double fitted_exponent = 0.0;  // of sup_{r <= eps sqrt t} |u*|
  double constant = 0.0;         // smallest C with |u*| <= C Gamma on the region
  double min_residual = 0.0;     // min of the discrete parabolic residual of W*, scaled by zeta/t
  double discrete_F_deviation = 0.0;  // sup |F_h - F| on r <= R, over F(R), R = eps sqrt(t_end)
  double min_ratio = 0.0, max_ratio = 0.0;  // W* / zeta on the region
  double eps = 0.0;
};

EnvelopeReport supersolution_envelope(const DiagnosticsTrace& trace, const EvolutionGrid& grid,
                                      const HarmonicSetup& setup, double D, double D_prime,
                                      double eps = 0.3, double s_from = 2.0);

/// sup_r |u - u_exact| / sup_r u_exact in the U gauge for self-similar data,
/// u*_exact = (1+t)^{-d/2} exp(-r^2 / 4(1+t)).
double selfsimilar_exact_error(const Checkpoint& c, const EvolutionGrid& grid, double d);

/// Radial (k = 0) heat kernel of -Delta + lambda r^{-2} averaged over the sphere.
double hardy_radial_kernel(int N, double lambda, double r, double rho, double t);

struct KernelProbe {
  double y = 0.0;
  std::vector<double> x;
  std::vector<double> tau;
  std::vector<std::vector<double>> estimates;  // per width, per x
  std::vector<double> extrapolated;            // per x
  double expected = 0.0;
  double max_relative_error = 0.0;
  double oracle_relative_error = -1.0;  // vs the Bessel kernel, when available
};

/// Evolves unit-mass rings at radius y for two widths and estimates
/// t^{d/2} p(x, y, t) / (U(x) U(y)) at s_end, extrapolated in the width.
KernelProbe kernel_probe(const HarmonicSetup& setup, const SelfSimilarFrame& frame, double y,
                         double tau, const std::vector<double>& x, double s_end = 8.0,
                         double ds = 1e-3);

}  // namespace heatlab
