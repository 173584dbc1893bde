#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace heatlab {

/// A prescribed positive profile used to build a potential by inverting the
/// harmonic ODE.  The profile is given through log U and its first two
/// derivatives in r, which keeps the inversion well conditioned.
struct HarmonicProfileSeed {
  std::function<double(double)> log_u;    // log U(r)
  std::function<double(double)> dlog_u;   // (log U)'(r)
  std::function<double(double)> d2log_u;  // (log U)''(r)
  double power_at_origin = 0.0;           // U ~ r^{a0} as r -> 0
  double power_at_infinity = 0.0;         // U ~ c r^{a_inf} as r -> infinity
  double correction_rate = 2.0;           // relative correction U/v - c* = O(r^-rate)
  std::string description;

  /// U(r) = r^{a0} (1 + r^2)^{(a_inf - a0)/2}.
  static HarmonicProfileSeed power_transition(double a0, double a_inf);
};

enum class PotentialKind { Free, Hardy, Interpolated, Designer, CompactBump };

std::string to_string(PotentialKind kind);

/// Radial potential V(r) with its inverse-square limits.  All members are
/// immutable after construction; the shift term adds omega r^-2 (angular modes).
class PotentialSpec {
 public:
  static PotentialSpec free(int N);
  static PotentialSpec hardy(int N, double lambda);
  /// V(r) = [l1 + (l2 - l1) r^theta / (r0^theta + r^theta)] r^-2.
  static PotentialSpec interpolated(int N, double lambda1, double lambda2, double theta,
                                    double r0);
  /// V(r) = amplitude (1 - (r/radius)^2)^2 for r < radius, zero outside.
  static PotentialSpec compact_bump(int N, double amplitude, double radius);
  static PotentialSpec designer(int N, HarmonicProfileSeed seed);

  PotentialKind kind() const { return kind_; }
  int N() const { return N_; }
  double lambda1() const { return base_lambda1_ + shift_; }
  double lambda2() const { return base_lambda2_ + shift_; }
  double theta() const { return theta_; }
  double r0() const { return r0_; }
  double amplitude() const { return amplitude_; }
  double radius() const { return radius_; }
  double angular_shift() const { return shift_; }
  const HarmonicProfileSeed* seed() const { return seed_.get(); }

  /// Exponent q and coefficient b of the leading correction
  /// r^2 V(r) - lambda1 ~ b r^q near the origin (b = 0 when absent).
  double origin_correction_power() const;
  double origin_correction_coefficient() const;
  /// Rate of r^2 V - lambda2 -> 0 at infinity (infinity for exact power tails).
  double far_field_rate() const;

  double r2V(double r) const;     // r^2 V(r)
  double V(double r) const { return r2V(r) / (r * r); }
  double dV(double r) const;      // V'(r)

  PotentialSpec with_shift(double omega) const;

  std::string describe() const;

 private:
  PotentialSpec() = default;

  PotentialKind kind_ = PotentialKind::Free;
  int N_ = 2;
  double base_lambda1_ = 0.0;
  double base_lambda2_ = 0.0;
  double theta_ = 0.0;
  double r0_ = 1.0;
  double amplitude_ = 0.0;
  double radius_ = 1.0;
  double shift_ = 0.0;
  std::shared_ptr<const HarmonicProfileSeed> seed_;
};

enum class Classification { S, Sstar, C, Excluded };

std::string to_string(Classification c);

struct ExponentData {
  int N = 2;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double A_plus_l1 = 0.0;
  double A_plus_l2 = 0.0;
  double A_minus_l2 = 0.0;
  double A = 0.0;  // chosen exponent: A+(l2) if subcritical, A-(l2) if critical
  double d = 0.0;  // effective dimension N + 2A
  double Q = 0.0;  // (N-2)^2 + 4 lambda2
  Classification classification = Classification::Excluded;
  std::string reason;  // populated when Excluded
};

struct ExponentPair {
  double plus = 0.0;
  double minus = 0.0;
};

/// Roots of A^2 + (N-2) A - lambda = 0.
ExponentPair critical_exponents(int N, double lambda);

double hardy_threshold(int N);  // -(N-2)^2 / 4

struct SphereEigen {
  double omega = 0.0;
  long multiplicity = 0;
};

SphereEigen sphere_eigenvalue(int N, int k);

PotentialSpec shifted_potential(const PotentialSpec& spec, int k);

struct Normalization {
  double c_d = 0.0;
  double kappa = 0.0;
};

Normalization normalization_constants(int N, double A);

double sphere_area(int N);  // |S^{N-1}|

/// Builds exponent data with the classification supplied by the tail fit.
ExponentData make_exponent_data(const PotentialSpec& spec, Classification classification);

struct ConditionVReport {
  double origin_rate_sup = 0.0;   // max r^-theta |r^2 V - l1| on r <= 1
  double origin_rate_end = 0.0;   // same quantity at the smallest sample
  double far_rate_sup = 0.0;      // max r^theta |r^2 V - l2| on r >= 1
  double far_rate_end = 0.0;      // same quantity at the largest sample
  double sup_r3_dV = 0.0;         // sup r^3 |V'| on r >= 1
  double theta_used = 0.0;
  bool violated = false;
  std::string message;
};

/// Evaluates the three condition (V) diagnostics on a sample grid.  The
/// convergence rate defaults to the spec's declared theta.
ConditionVReport validate_condition_V(const PotentialSpec& spec, std::span<const double> grid,
                                      std::optional<double> rate = std::nullopt,
                                      double tolerance = 1e6);

/// Log-uniform grid with `per_decade` samples per decade.
std::vector<double> log_grid(double r_min, double r_max, int per_decade);

PotentialSpec designer_potential(const HarmonicProfileSeed& seed, int N);

}  // namespace heatlab
