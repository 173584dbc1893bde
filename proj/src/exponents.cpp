#include "heatlab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heatlab/error.hpp"

namespace heatlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double binomial(long n, long k) {
  if (k < 0 || n < k) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

}  // namespace

HarmonicProfileSeed HarmonicProfileSeed::power_transition(double a0, double a_inf) {
  const double b = a_inf - a0;
  HarmonicProfileSeed seed;
  seed.log_u = [a0, b](double r) { return a0 * std::log(r) + 0.5 * b * std::log1p(r * r); };
  seed.dlog_u = [a0, b](double r) { return a0 / r + b * r / (1.0 + r * r); };
  seed.d2log_u = [a0, b](double r) {
    const double q = 1.0 + r * r;
    return -a0 / (r * r) + b * (1.0 - r * r) / (q * q);
  };
  seed.power_at_origin = a0;
  seed.power_at_infinity = a_inf;
  seed.correction_rate = 2.0;
  std::ostringstream os;
  os << "r^" << a0 << " (1+r^2)^" << 0.5 * b;
  seed.description = os.str();
  return seed;
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::Free: return "free";
    case PotentialKind::Hardy: return "hardy";
    case PotentialKind::Interpolated: return "interpolated";
    case PotentialKind::Designer: return "designer";
    case PotentialKind::CompactBump: return "compact_bump";
  }
  return "unknown";
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::S: return "S";
    case Classification::Sstar: return "S*";
    case Classification::C: return "C";
    case Classification::Excluded: return "excluded";
  }
  return "unknown";
}

double hardy_threshold(int N) { return -0.25 * (N - 2.0) * (N - 2.0); }

ExponentPair critical_exponents(int N, double lambda) {
  if (N < 2) throw Error(ErrorKind::DegenerateDimension, "N must be >= 2");
  const double lstar = hardy_threshold(N);
  double disc = (N - 2.0) * (N - 2.0) + 4.0 * lambda;
  if (lambda < lstar) {
    if (lstar - lambda <= 1e-14 * (1.0 + std::abs(lstar))) {
      warn("lambda below the Hardy threshold by round-off; clamped to lambda*");
      disc = 0.0;
    } else {
      std::ostringstream os;
      os << "lambda = " << lambda << " < lambda* = " << lstar;
      throw Error(ErrorKind::SupercriticalParameter, os.str());
    }
  }
  disc = std::max(disc, 0.0);
  const double root = std::sqrt(disc);
  // The product of the roots is -lambda; use it to avoid cancellation.
  const double big = 0.5 * (-(N - 2.0) + (N - 2.0 >= 0 ? -root : root));
  ExponentPair out;
  if (big != 0.0 && std::abs(lambda) > 0.0) {
    const double other = -lambda / big;
    out.plus = std::max(big, other);
    out.minus = std::min(big, other);
  } else {
    out.plus = 0.5 * (-(N - 2.0) + root);
    out.minus = 0.5 * (-(N - 2.0) - root);
  }
  return out;
}

SphereEigen sphere_eigenvalue(int N, int k) {
  SphereEigen e;
  e.omega = static_cast<double>(k) * (N + k - 2.0);
  if (k == 0) {
    e.multiplicity = 1;
  } else if (N == 2) {
    e.multiplicity = 2;
  } else if (N == 3) {
    e.multiplicity = 2L * k + 1;
  } else {
    e.multiplicity = static_cast<long>(binomial(N + k - 1, k) - binomial(N + k - 3, k - 2));
  }
  return e;
}

PotentialSpec PotentialSpec::free(int N) {
  PotentialSpec s;
  s.kind_ = PotentialKind::Free;
  s.N_ = N;
  return s;
}

PotentialSpec PotentialSpec::hardy(int N, double lambda) {
  PotentialSpec s;
  s.kind_ = PotentialKind::Hardy;
  s.N_ = N;
  s.base_lambda1_ = lambda;
  s.base_lambda2_ = lambda;
  return s;
}

PotentialSpec PotentialSpec::interpolated(int N, double lambda1, double lambda2, double theta,
                                          double r0) {
  if (!(theta > 0.0) || !(r0 > 0.0))
    throw Error(ErrorKind::ConfigError, "interpolated potential needs theta > 0 and r0 > 0");
  PotentialSpec s;
  s.kind_ = PotentialKind::Interpolated;
  s.N_ = N;
  s.base_lambda1_ = lambda1;
  s.base_lambda2_ = lambda2;
  s.theta_ = theta;
  s.r0_ = r0;
  return s;
}

PotentialSpec PotentialSpec::compact_bump(int N, double amplitude, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::ConfigError, "bump radius must be positive");
  PotentialSpec s;
  s.kind_ = PotentialKind::CompactBump;
  s.N_ = N;
  s.amplitude_ = amplitude;
  s.radius_ = radius;
  s.theta_ = 2.0;
  return s;
}

PotentialSpec PotentialSpec::designer(int N, HarmonicProfileSeed seed) {
  PotentialSpec s;
  s.kind_ = PotentialKind::Designer;
  s.N_ = N;
  const double a0 = seed.power_at_origin, ai = seed.power_at_infinity;
  s.base_lambda1_ = a0 * (a0 + N - 2.0);
  s.base_lambda2_ = ai * (ai + N - 2.0);
  s.theta_ = seed.correction_rate;
  s.seed_ = std::make_shared<const HarmonicProfileSeed>(std::move(seed));
  return s;
}

PotentialSpec PotentialSpec::with_shift(double omega) const {
  PotentialSpec s = *this;
  s.shift_ += omega;
  return s;
}

double PotentialSpec::origin_correction_power() const {
  switch (kind_) {
    case PotentialKind::Interpolated: return theta_;
    case PotentialKind::CompactBump: return 2.0;
    default: return 0.0;
  }
}

double PotentialSpec::origin_correction_coefficient() const {
  switch (kind_) {
    case PotentialKind::Interpolated:
      return (base_lambda2_ - base_lambda1_) / std::pow(r0_, theta_);
    case PotentialKind::CompactBump: return amplitude_;
    default: return 0.0;
  }
}

double PotentialSpec::far_field_rate() const {
  switch (kind_) {
    case PotentialKind::Interpolated: return theta_;
    case PotentialKind::Designer: return seed_->correction_rate;
    default: return kInf;
  }
}

double PotentialSpec::r2V(double r) const {
  double g = 0.0;
  switch (kind_) {
    case PotentialKind::Free: break;
    case PotentialKind::Hardy: g = base_lambda1_; break;
    case PotentialKind::Interpolated: {
      const double s = 1.0 / (1.0 + std::pow(r0_ / r, theta_));
      g = base_lambda1_ + (base_lambda2_ - base_lambda1_) * s;
      break;
    }
    case PotentialKind::CompactBump: {
      if (r < radius_) {
        const double x = r / radius_;
        const double b = 1.0 - x * x;
        g = amplitude_ * r * r * b * b;
      }
      break;
    }
    case PotentialKind::Designer: {
      const double l1 = seed_->dlog_u(r), l2 = seed_->d2log_u(r);
      g = r * r * (l2 + l1 * l1) + (N_ - 1.0) * r * l1;
      break;
    }
  }
  return g + shift_;
}

double PotentialSpec::dV(double r) const {
  double dg = 0.0;  // d/dr of r^2 V
  switch (kind_) {
    case PotentialKind::Free:
    case PotentialKind::Hardy: break;
    case PotentialKind::Interpolated: {
      const double s = 1.0 / (1.0 + std::pow(r0_ / r, theta_));
      dg = (base_lambda2_ - base_lambda1_) * theta_ / r * s * (1.0 - s);
      break;
    }
    case PotentialKind::CompactBump: {
      if (r < radius_) {
        const double x = r / radius_;
        const double b = 1.0 - x * x;
        dg = amplitude_ * (2.0 * r * b * b - 4.0 * r * r * r * b / (radius_ * radius_));
      }
      break;
    }
    case PotentialKind::Designer: {
      const double h = 1e-5 * r;
      dg = (r2V(r + h) - r2V(r - h)) / (2.0 * h);
      break;
    }
  }
  return dg / (r * r) - 2.0 * r2V(r) / (r * r * r);
}

std::string PotentialSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(N=" << N_;
  switch (kind_) {
    case PotentialKind::Hardy: os << ", lambda=" << base_lambda1_; break;
    case PotentialKind::Interpolated:
      os << ", lambda1=" << base_lambda1_ << ", lambda2=" << base_lambda2_ << ", theta=" << theta_
         << ", r0=" << r0_;
      break;
    case PotentialKind::CompactBump:
      os << ", amplitude=" << amplitude_ << ", radius=" << radius_;
      break;
    case PotentialKind::Designer: os << ", U=" << seed_->description; break;
    default: break;
  }
  if (shift_ != 0.0) os << ", shift=" << shift_;
  os << ")";
  return os.str();
}

PotentialSpec shifted_potential(const PotentialSpec& spec, int k) {
  const double omega = sphere_eigenvalue(spec.N(), k).omega;
  if (k == 0) return spec;
  switch (spec.kind()) {
    case PotentialKind::Free:
    case PotentialKind::Hardy: return PotentialSpec::hardy(spec.N(), spec.lambda1() + omega);
    case PotentialKind::Interpolated:
      return PotentialSpec::interpolated(spec.N(), spec.lambda1() + omega, spec.lambda2() + omega,
                                         spec.theta(), spec.r0());
    default: return spec.with_shift(omega);
  }
}

double sphere_area(int N) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
}

Normalization normalization_constants(int N, double A) {
  const double d = N + 2.0 * A;
  if (!(d > 0.0)) throw Error(ErrorKind::DegenerateDimension, "d = N + 2A must be positive");
  Normalization n;
  n.c_d = std::exp(-0.5 * ((d - 1.0) * std::numbers::ln2 + std::lgamma(0.5 * d)));
  n.kappa = std::exp(d * std::numbers::ln2 + 0.5 * N * std::log(std::numbers::pi) +
                     std::lgamma(0.5 * d) - std::lgamma(0.5 * N));
  return n;
}

ExponentData make_exponent_data(const PotentialSpec& spec, Classification classification) {
  ExponentData e;
  e.N = spec.N();
  e.lambda1 = spec.lambda1();
  e.lambda2 = spec.lambda2();
  e.A_plus_l1 = critical_exponents(e.N, e.lambda1).plus;
  const auto far = critical_exponents(e.N, e.lambda2);
  e.A_plus_l2 = far.plus;
  e.A_minus_l2 = far.minus;
  e.Q = (e.N - 2.0) * (e.N - 2.0) + 4.0 * e.lambda2;
  e.classification = classification;
  e.A = classification == Classification::C ? far.minus : far.plus;
  e.d = e.N + 2.0 * e.A;
  if (classification == Classification::C && !(far.minus > -0.5 * e.N)) {
    e.classification = Classification::Excluded;
    e.reason = "positive-critical: A-(lambda2) <= -N/2";
  }
  return e;
}

std::vector<double> log_grid(double r_min, double r_max, int per_decade) {
  const int n = std::max(2, static_cast<int>(std::ceil(std::log10(r_max / r_min) * per_decade)) + 1);
  std::vector<double> g(n);
  const double a = std::log(r_min), b = std::log(r_max);
  for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
  return g;
}

ConditionVReport validate_condition_V(const PotentialSpec& spec, std::span<const double> grid,
                                      std::optional<double> rate, double tolerance) {
  ConditionVReport rep;
  const double theta = rate.value_or(spec.theta() > 0.0 ? spec.theta() : 1.0);
  rep.theta_used = theta;
  const double l1 = spec.lambda1(), l2 = spec.lambda2();
  const double r_lo = grid.front(), r_hi = grid.back();
  double origin_inner = 0.0, far_inner = 0.0;  // values one decade in from each end
  bool origin_seen = false;
  for (double r : grid) {
    const double g = spec.r2V(r);
    if (!std::isfinite(g)) {
      rep.violated = true;
      rep.message = "potential not finite on the sample grid";
      continue;
    }
    if (r <= 1.0) {
      const double q = std::pow(r, -theta) * std::abs(g - l1);
      rep.origin_rate_sup = std::max(rep.origin_rate_sup, q);
      if (!origin_seen) rep.origin_rate_end = q, origin_seen = true;
      if (r <= 10.0 * r_lo) origin_inner = q;
    }
    if (r >= 1.0) {
      const double q = std::pow(r, theta) * std::abs(g - l2);
      rep.far_rate_sup = std::max(rep.far_rate_sup, q);
      rep.far_rate_end = q;
      if (r <= 0.1 * r_hi) far_inner = q;
      rep.sup_r3_dV = std::max(rep.sup_r3_dV, r * r * r * std::abs(spec.dV(r)));
    }
  }
  const auto flag = [&](bool bad, const char* text) {
    if (!bad) return;
    rep.violated = true;
    if (!rep.message.empty()) rep.message += "; ";
    rep.message += text;
  };
  flag(rep.origin_rate_sup > tolerance, "r^-theta |r^2V - lambda1| unbounded near 0");
  flag(rep.far_rate_sup > tolerance, "r^theta |r^2V - lambda2| unbounded at infinity");
  flag(rep.sup_r3_dV > tolerance, "sup r^3 |V'| exceeds tolerance");
  // A diagnostic still growing by 2x across the extreme decade is not bounded.
  flag(rep.origin_rate_end > 1e-12 && rep.origin_rate_end > 2.0 * origin_inner,
       "near-origin diagnostic growing toward 0");
  flag(rep.far_rate_end > 1e-12 && rep.far_rate_end > 2.0 * far_inner,
       "far-field diagnostic growing toward infinity");
  return rep;
}

PotentialSpec designer_potential(const HarmonicProfileSeed& seed, int N) {
  if (!seed.log_u || !seed.dlog_u || !seed.d2log_u)
    throw Error(ErrorKind::InvalidProfile, "seed must provide log U and two derivatives");
  for (double r : log_grid(1e-6, 1e6, 8)) {
    const double lu = seed.log_u(r), l1 = seed.dlog_u(r), l2 = seed.d2log_u(r);
    if (!std::isfinite(lu) || !std::isfinite(l1) || !std::isfinite(l2))
      throw Error(ErrorKind::InvalidProfile, "profile is not positive and smooth on (0, inf)");
  }
  // Check the declared power behaviors against the profile's log-slope.
  const double p0 = 1e-6 * seed.dlog_u(1e-6);
  const double pinf = 1e6 * seed.dlog_u(1e6);
  if (std::abs(p0 - seed.power_at_origin) > 1e-3 || std::abs(pinf - seed.power_at_infinity) > 1e-3)
    throw Error(ErrorKind::InvalidProfile, "declared power behaviors do not match the profile");
  const double l1 = seed.power_at_origin * (seed.power_at_origin + N - 2.0);
  const double l2 = seed.power_at_infinity * (seed.power_at_infinity + N - 2.0);
  const double lstar = hardy_threshold(N);
  if (l1 < lstar - 1e-12 || l2 < lstar - 1e-12)
    throw Error(ErrorKind::InvalidProfile, "profile powers imply lambda below lambda*");
  if (seed.power_at_origin < -(N - 2.0) / 2.0 - 1e-12)
    throw Error(ErrorKind::InvalidProfile, "origin power must be the regular exponent A+(lambda1)");
  return PotentialSpec::designer(N, seed);
}

}  // namespace heatlab
