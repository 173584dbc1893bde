#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "heatlab/exponents.hpp"
#include "heatlab/field.hpp"

namespace heatlab {

enum class TailType { RegularPower, LogGrowth, SingularPower };

std::string to_string(TailType tail);

/// Regular positive solution of U'' + (N-1)/r U' = V U on a log-uniform grid,
/// normalized so that U ~ r^{A+(lambda1)} with unit coefficient at the origin.
class HarmonicProfile {
 public:
  std::vector<double> r;
  std::vector<double> U;
  std::vector<double> dU;
  std::vector<double> p;  // r U'/U, the log-slope
  double c_star = 1.0;
  double tail_offset = 0.0;  // b of the two-term tail fit U ~ c* v + b v2
  TailType tail = TailType::RegularPower;
  double delta_fit = 0.0;
  double A = 0.0;  // gauge exponent used for U_d

  int N() const { return N_; }
  const PotentialSpec& potential() const { return spec_; }
  double a0() const { return a0_; }  // local power at the origin

  /// U and U' at any r > 0 up to the right end of the grid.
  double value(double r) const;
  double slope(double r) const;
  double log_value(double r) const;
  double U_d(double r) const { return value(r) * std::pow(r, -A); }

  /// Nested integral F(r) = int_0^r (int_0^s tau^{N-1} U^2) s^{1-N} U^{-2} ds.
  double F(double r) const;
  /// int_0^r tau^{N-1} U(tau)^2 dtau.
  double weight_integral(double r) const;

  double r_min() const { return r.front(); }
  double r_max() const { return r.back(); }

 private:
  friend HarmonicProfile solve_regular(const PotentialSpec&, double, double, int);
  void build_kernels();
  std::size_t interval(double r) const;
  double frobenius_log(double r) const;

  PotentialSpec spec_ = PotentialSpec::free(2);
  int N_ = 2;
  double a0_ = 0.0;
  double frob_c_ = 0.0, frob_q_ = 0.0;
  double h_ = 0.0;  // log spacing of the grid
  std::vector<double> logU_, dp_;  // log U and dp/dx at the nodes
  std::vector<double> I_, F_;  // weight_integral and F at the grid nodes
};

HarmonicProfile solve_regular(const PotentialSpec& spec, double r_min, double r_max,
                              int n_points);

struct TailFit {
  TailType tail = TailType::RegularPower;
  double c_star = 1.0;
  double offset = 0.0;
  double residual = 0.0;
  double rival_residual = 0.0;
  TailType rival = TailType::SingularPower;
};

/// Chooses the far-field comparison function on the last decade of the grid
/// and fits c* = lim U/v.  Updates the profile's tail and c_star.
TailFit classify_tail(HarmonicProfile& profile, const ExponentData& exps);

/// Comparison function v(r) for a tail type.
double comparison_function(TailType tail, int N, double lambda2, double r);

/// Decay exponent of [U/v]' on the last decade; infinity when it vanishes.
double decay_diagnostic(HarmonicProfile& profile, const ExponentData& exps);

double f_d_kernel(const HarmonicProfile& profile, const ExponentData& exps, double r);

/// Nested integral with the time-derivative samples (given on the profile
/// grid) inserted in the inner integral.
double f_Nj_expansion(const HarmonicProfile& profile, const RadialField& dt_field, double r);

Classification classification_of(TailType tail);

/// Computes profile, tail, c* and exponent data in one pass with default
/// resolution; r_max defaults to 1e4.
struct HarmonicSetup {
  HarmonicProfile profile;
  ExponentData exps;
  TailFit fit;
};

HarmonicSetup prepare(const PotentialSpec& spec, double r_max = 1e4, int n_points = 4096,
                      double r_min = 1e-6);

/// One CSV row per grid node with columns r, U, dU, U_d, nu_d.
std::string profile_csv(const HarmonicProfile& profile);

}  // namespace heatlab
