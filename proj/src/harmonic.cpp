#include "heatlab/harmonic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "heatlab/error.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using State = std::array<double, 2>;  // (log U, p) as functions of x = log r

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class RiccatiSystem {
 public:
  RiccatiSystem(const PotentialSpec& spec) : spec_(spec), n2_(spec.N() - 2.0) {}

  State operator()(double x, const State& y) const {
    const double g = spec_.r2V(std::exp(x));
    return {y[1], g - n2_ * y[1] - y[1] * y[1]};
  }

 private:
  const PotentialSpec& spec_;
  double n2_;
};

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (const auto& [c, k] : terms) {
    out[0] += h * c * (*k)[0];
    out[1] += h * c * (*k)[1];
  }
  return out;
}

// Advances y from x0 to x1 with adaptive steps; `h` carries the step size
// between calls.
void advance(const RiccatiSystem& f, double x0, double x1, State& y, double& h, double rtol) {
  double x = x0;
  State k1 = f(x, y);
  int guard = 0;
  while (x < x1) {
    if (++guard > 1000000) throw Error(ErrorKind::ConvergenceFailure, "harmonic ODE step limit");
    const bool last = x + h >= x1;
    const double step = last ? x1 - x : h;
    const State k2 = f(x + c2 * step, axpy(y, step, {{a21, &k1}}));
    const State k3 = f(x + c3 * step, axpy(y, step, {{a31, &k1}, {a32, &k2}}));
    const State k4 = f(x + c4 * step, axpy(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 =
        f(x + c5 * step, axpy(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = f(x + step, axpy(y, step,
                                      {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y5 =
        axpy(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State k7 = f(x + step, y5);
    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e =
          step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = rtol * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])));
      err = std::max(err, std::abs(e) / scale);
    }
    if (!std::isfinite(err) || !std::isfinite(y5[1]) || y5[1] < -1e8)
      throw Error(ErrorKind::NotNonnegative, "regular solution U reaches zero");
    if (err <= 1.0) {
      x += step;
      y = y5;
      k1 = k7;
      if (last) x = x1;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    const double proposed = step * factor;
    if (!(last && err <= 1.0)) h = proposed;
    else h = std::max(h, proposed);
    if (h < 1e-13) throw Error(ErrorKind::NotNonnegative, "regular solution U reaches zero");
  }
}

double lagrange4(const std::array<double, 4>& xs, const std::array<double, 4>& ys, double x) {
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    double w = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != i) w *= (x - xs[j]) / (xs[i] - xs[j]);
    total += w * ys[i];
  }
  return total;
}

}  // namespace

std::string to_string(TailType tail) {
  switch (tail) {
    case TailType::RegularPower: return "RegularPower";
    case TailType::LogGrowth: return "LogGrowth";
    case TailType::SingularPower: return "SingularPower";
  }
  return "unknown";
}

std::string to_string(Gauge gauge) {
  switch (gauge) {
    case Gauge::U: return "U";
    case Gauge::Star: return "star";
    case Gauge::SelfSim: return "selfsim";
  }
  return "unknown";
}

Classification classification_of(TailType tail) {
  switch (tail) {
    case TailType::RegularPower: return Classification::S;
    case TailType::LogGrowth: return Classification::Sstar;
    case TailType::SingularPower: return Classification::C;
  }
  return Classification::Excluded;
}

HarmonicProfile solve_regular(const PotentialSpec& spec, double r_min, double r_max,
                              int n_points) {
  if (!(r_min > 0.0) || !(r_max > r_min) || n_points < 16)
    throw Error(ErrorKind::OutOfRange, "invalid profile grid");
  HarmonicProfile prof;
  prof.spec_ = spec;
  prof.N_ = spec.N();
  const int N = spec.N();
  const HarmonicProfileSeed* seed = spec.kind() == PotentialKind::Designer ? spec.seed() : nullptr;
  const bool seeded = seed && spec.angular_shift() == 0.0;

  State y;
  if (seeded) {
    prof.a0_ = seed->power_at_origin;
    y = {seed->log_u(r_min), r_min * seed->dlog_u(r_min)};
  } else {
    const double a = critical_exponents(N, spec.lambda1()).plus;
    const double q = spec.origin_correction_power();
    const double b = spec.origin_correction_coefficient();
    prof.a0_ = a;
    if (q > 0.0 && b != 0.0) {
      prof.frob_q_ = q;
      prof.frob_c_ = b / (q * (q + 2.0 * a + N - 2.0));
    }
    const double cr = prof.frob_c_ * std::pow(r_min, prof.frob_q_);
    y = {a * std::log(r_min) + std::log1p(cr), a + prof.frob_q_ * cr / (1.0 + cr)};
  }

  const double x0 = std::log(r_min), x1 = std::log(r_max);
  prof.h_ = (x1 - x0) / (n_points - 1);
  prof.r.resize(n_points);
  prof.U.resize(n_points);
  prof.dU.resize(n_points);
  prof.p.resize(n_points);
  prof.logU_.resize(n_points);
  prof.dp_.resize(n_points);

  const RiccatiSystem f(spec);
  double h = prof.h_;
  for (int i = 0; i < n_points; ++i) {
    const double x = (i + 1 == n_points) ? x1 : x0 + i * prof.h_;
    if (i > 0) advance(f, x0 + (i - 1) * prof.h_, x, y, h, 1e-13);
    const double r = i == 0 ? r_min : (i + 1 == n_points ? r_max : std::exp(x));
    prof.r[i] = r;
    prof.logU_[i] = y[0];
    prof.p[i] = y[1];
    prof.dp_[i] = f(x, y)[1];
    prof.U[i] = std::exp(y[0]);
    prof.dU[i] = prof.U[i] * y[1] / r;
    if (!(prof.U[i] > 0.0) || !std::isfinite(prof.U[i]))
      throw Error(ErrorKind::NotNonnegative, "regular solution U is not positive");
  }
  prof.build_kernels();
  return prof;
}

std::size_t HarmonicProfile::interval(double rr) const {
  const double t = (std::log(rr) - std::log(r.front())) / h_;
  const auto i = static_cast<std::ptrdiff_t>(std::floor(t));
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, r.size() - 2));
}

double HarmonicProfile::frobenius_log(double rr) const {
  if (spec_.kind() == PotentialKind::Designer && spec_.angular_shift() == 0.0)
    return spec_.seed()->log_u(rr);
  return a0_ * std::log(rr) + std::log1p(frob_c_ * std::pow(rr, frob_q_));
}

double HarmonicProfile::log_value(double rr) const {
  if (!(rr > 0.0)) throw Error(ErrorKind::OutOfRange, "profile evaluated at r <= 0");
  if (rr < r.front()) return frobenius_log(rr);
  if (rr > r.back() * (1.0 + 1e-12)) throw Error(ErrorKind::OutOfRange, "r beyond profile grid");
  const std::size_t i = interval(rr);
  const double t = (std::log(rr) - std::log(r[i])) / h_;
  return num::hermite(t, h_, logU_[i], logU_[i + 1], p[i], p[i + 1]);
}

double HarmonicProfile::value(double rr) const { return std::exp(log_value(rr)); }

double HarmonicProfile::slope(double rr) const {
  double pp;
  if (rr < r.front()) {
    if (spec_.kind() == PotentialKind::Designer && spec_.angular_shift() == 0.0) {
      pp = rr * spec_.seed()->dlog_u(rr);
    } else {
      const double cr = frob_c_ * std::pow(rr, frob_q_);
      pp = a0_ + frob_q_ * cr / (1.0 + cr);
    }
  } else {
    if (rr > r.back() * (1.0 + 1e-12)) throw Error(ErrorKind::OutOfRange, "r beyond profile grid");
    const std::size_t i = interval(rr);
    const double t = (std::log(rr) - std::log(r[i])) / h_;
    pp = num::hermite(t, h_, p[i], p[i + 1], dp_[i], dp_[i + 1]);
  }
  return value(rr) * pp / rr;
}

void HarmonicProfile::build_kernels() {
  const std::size_t n = r.size();
  I_.assign(n, 0.0);
  F_.assign(n, 0.0);
  const double d1 = N_ + 2.0 * a0_;
  I_[0] = std::pow(r[0], d1) / d1 * std::exp(2.0 * (logU_[0] - a0_ * std::log(r[0])));
  F_[0] = r[0] * r[0] / (2.0 * d1);
  const auto rule = num::gauss_legendre(8);
  const auto W = [&](std::size_t i, double t) {
    const double L = num::hermite(t, h_, logU_[i], logU_[i + 1], p[i], p[i + 1]);
    const double x = std::log(r[i]) + t * h_;
    return std::exp(N_ * x + 2.0 * L);  // tau^{N-1} U^2 times dtau/dx = tau
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double inc_I = 0.0, inc_F = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double tk = 0.5 * (1.0 + rule.nodes[k]);
      double inner = 0.0;
      for (int m = 0; m < 8; ++m) inner += rule.weights[m] * W(i, 0.5 * tk * (1.0 + rule.nodes[m]));
      inner *= 0.5 * tk * h_;
      const double wk = W(i, tk);
      const double xk = std::log(r[i]) + tk * h_;
      const double rk = std::exp(xk);
      // I(s) / (s^{N-1} U^2) ds = (I / W) * s^2 dx with W as defined above.
      inc_F += rule.weights[k] * (I_[i] + inner) / wk * rk * rk;
      inc_I += rule.weights[k] * wk;
    }
    I_[i + 1] = I_[i] + 0.5 * h_ * inc_I;
    F_[i + 1] = F_[i] + 0.5 * h_ * inc_F;
  }
}

double HarmonicProfile::weight_integral(double rr) const {
  if (rr <= 0.0) return 0.0;
  const double d1 = N_ + 2.0 * a0_;
  if (rr <= r.front()) return std::pow(rr, d1) / d1;
  if (rr > r.back() * (1.0 + 1e-12)) throw Error(ErrorKind::OutOfRange, "r beyond profile grid");
  const std::size_t i = interval(rr);
  const double x0 = std::log(r[i]);
  const double span = std::log(rr) - x0;
  const double inc = num::integrate(
      [&](double x) { return std::exp(N_ * x + 2.0 * log_value(std::exp(x))); }, x0, x0 + span);
  return I_[i] + inc;
}

double HarmonicProfile::F(double rr) const {
  if (rr <= 0.0) return 0.0;
  const double d1 = N_ + 2.0 * a0_;
  if (rr <= r.front()) return rr * rr / (2.0 * d1);
  if (rr > r.back() * (1.0 + 1e-12)) throw Error(ErrorKind::OutOfRange, "r beyond profile grid");
  const std::size_t i = interval(rr);
  const double x0 = std::log(r[i]);
  const double x1 = std::log(rr);
  const auto W = [&](double x) { return std::exp(N_ * x + 2.0 * log_value(std::exp(x))); };
  const double inc = num::integrate(
      [&](double x) {
        const double inner = num::integrate(W, x0, x);
        const double rx = std::exp(x);
        return (I_[i] + inner) / W(x) * rx * rx;
      },
      x0, x1);
  return F_[i] + inc;
}

double comparison_function(TailType tail, int N, double lambda2, double r) {
  const auto ex = critical_exponents(N, lambda2);
  switch (tail) {
    case TailType::RegularPower: return std::pow(r, ex.plus);
    case TailType::SingularPower: return std::pow(r, ex.minus);
    case TailType::LogGrowth: return std::pow(r, -0.5 * (N - 2.0)) * std::log(r);
  }
  return 0.0;
}

namespace {

std::vector<std::size_t> last_decade(const HarmonicProfile& prof) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < prof.r.size(); ++i)
    if (prof.r[i] >= prof.r.back() / 10.0) idx.push_back(i);
  return idx;
}

double tail_residual(const HarmonicProfile& prof, const std::vector<std::size_t>& idx, TailType tail,
                     double lambda2) {
  std::vector<double> y;
  y.reserve(idx.size());
  for (auto i : idx)
    y.push_back(std::log(prof.U[i]) -
                std::log(comparison_function(tail, prof.N(), lambda2, prof.r[i])));
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= y.size();
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / y.size());
}

}  // namespace

TailFit classify_tail(HarmonicProfile& prof, const ExponentData& exps) {
  const auto idx = last_decade(prof);
  const int N = prof.N();
  const double l2 = exps.lambda2;
  const bool at_threshold = std::abs(l2 - hardy_threshold(N)) <= 1e-12 * (1.0 + std::abs(l2));
  const TailType first = at_threshold ? TailType::LogGrowth : TailType::RegularPower;
  const TailType second = TailType::SingularPower;
  const double res1 = tail_residual(prof, idx, first, l2);
  const double res2 = tail_residual(prof, idx, second, l2);

  TailFit fit;
  fit.tail = res1 <= res2 ? first : second;
  fit.rival = res1 <= res2 ? second : first;
  fit.residual = std::min(res1, res2);
  fit.rival_residual = std::max(res1, res2);
  if (fit.rival_residual <= 1.1 * fit.residual) {
    std::ostringstream os;
    os << to_string(first) << " residual " << res1 << " vs " << to_string(second) << " residual "
       << res2;
    throw Error(ErrorKind::AmbiguousTail, os.str());
  }

  // c* from a two-term fit U ~ c v + b v2 with the leading correction.
  const double theta = prof.potential().far_field_rate();
  const double sqrtQ = std::sqrt(std::max(exps.Q, 0.0));
  std::vector<double> v, v2, u;
  bool two_term = true;
  for (auto i : idx) {
    const double r = prof.r[i];
    const double vi = comparison_function(fit.tail, N, l2, r);
    double ci = 0.0;
    switch (fit.tail) {
      case TailType::RegularPower: {
        const double rate = std::min(theta, sqrtQ > 0.0 ? sqrtQ : theta);
        two_term = std::isfinite(rate);
        ci = two_term ? vi * std::pow(r, -rate) : 0.0;
        break;
      }
      case TailType::SingularPower:
        two_term = std::isfinite(theta);
        ci = two_term ? vi * std::pow(r, -theta) : 0.0;
        break;
      case TailType::LogGrowth: ci = std::pow(r, -0.5 * (N - 2.0)); break;
    }
    v.push_back(vi);
    v2.push_back(ci);
    u.push_back(prof.U[i]);
  }
  if (two_term) {
    const auto coef = num::least_squares({v, v2}, u);
    fit.c_star = coef[0];
    fit.offset = coef[1];
  } else {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      num += u[k] * v[k];
      den += v[k] * v[k];
    }
    fit.c_star = num / den;
  }
  if (!(fit.c_star > 0.0))
    throw Error(ErrorKind::InvalidProfile, "fitted c* is not positive");
  prof.tail = fit.tail;
  prof.c_star = fit.c_star;
  prof.tail_offset = fit.offset;
  return fit;
}

double decay_diagnostic(HarmonicProfile& prof, const ExponentData& exps) {
  if (prof.tail == TailType::LogGrowth) {
    prof.delta_fit = std::numeric_limits<double>::quiet_NaN();
    return prof.delta_fit;
  }
  const auto ex = critical_exponents(prof.N(), exps.lambda2);
  const double pv = prof.tail == TailType::RegularPower ? ex.plus : ex.minus;
  const auto idx = last_decade(prof);
  std::vector<double> lx, ly;
  double biggest = 0.0;
  for (auto i : idx) biggest = std::max(biggest, std::abs(prof.p[i] - pv));
  if (biggest < 1e-10) {
    prof.delta_fit = kInf;
    return kInf;
  }
  for (auto i : idx) {
    const double r = prof.r[i];
    const double dp = std::abs(prof.p[i] - pv);
    if (dp < 1e-13) continue;
    const double ratio = prof.U[i] / comparison_function(prof.tail, prof.N(), exps.lambda2, r);
    lx.push_back(std::log(r));
    ly.push_back(std::log(dp * ratio / r));
  }
  if (lx.size() < 4) {
    prof.delta_fit = kInf;
    return kInf;
  }
  const auto line = num::fit_line(lx, ly);
  prof.delta_fit = -line.slope - 1.0;
  if (!(prof.delta_fit > 0.0)) warn("decay diagnostic delta <= 0");
  return prof.delta_fit;
}

double f_d_kernel(const HarmonicProfile& profile, const ExponentData&, double r) {
  if (r < 0.0) throw Error(ErrorKind::OutOfRange, "F_d evaluated at r < 0");
  if (r > profile.r_max() * (1.0 + 1e-12))
    throw Error(ErrorKind::OutOfRange, "F_d evaluated beyond the profile grid");
  return profile.F(r);
}

double f_Nj_expansion(const HarmonicProfile& prof, const RadialField& field, double r) {
  const std::size_t n = prof.r.size();
  if (field.values.size() != n || (!field.r.empty() && field.r.size() != n))
    throw Error(ErrorKind::GridMismatch, "field samples do not match the profile grid");
  if (r < 0.0 || r > prof.r_max() * (1.0 + 1e-12))
    throw Error(ErrorKind::OutOfRange, "F_N^j evaluated outside the profile grid");
  if (r == 0.0) return 0.0;
  const int N = prof.N();
  const double d1 = N + 2.0 * prof.a0();
  const double f0 = field.values[0];
  if (r <= prof.r_min()) return f0 * r * r / (2.0 * d1);

  const double h = std::log(prof.r[1] / prof.r[0]);
  const double lr0 = std::log(prof.r[0]);
  const auto field_at = [&](std::size_t i, double x) {
    const std::size_t j = std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, n - 4);
    std::array<double, 4> xs, ys;
    for (int k = 0; k < 4; ++k) {
      xs[k] = lr0 + (j + k) * h;
      ys[k] = field.values[j + k];
    }
    return lagrange4(xs, ys, x);
  };
  const auto W = [&](double x) { return std::exp(N * x + 2.0 * prof.log_value(std::exp(x))); };

  double I = f0 * prof.weight_integral(prof.r_min());
  double F = f0 * prof.r_min() * prof.r_min() / (2.0 * d1);
  const double xr = std::log(r);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xa = lr0 + i * h;
    if (xa >= xr) break;
    const double xb = std::min(xr, lr0 + (i + 1) * h);
    const double base = I;
    F += num::integrate(
        [&](double x) {
          const double inner =
              num::integrate([&](double z) { return W(z) * field_at(i, z); }, xa, x, 1, 6);
          const double rx = std::exp(x);
          return (base + inner) / W(x) * rx * rx;
        },
        xa, xb, 1, 6);
    I += num::integrate([&](double z) { return W(z) * field_at(i, z); }, xa, xb, 1, 6);
  }
  return F;
}

HarmonicSetup prepare(const PotentialSpec& spec, double r_max, int n_points, double r_min) {
  HarmonicSetup out{solve_regular(spec, r_min, r_max, n_points), {}, {}};
  const ExponentData probe = make_exponent_data(spec, Classification::S);
  out.fit = classify_tail(out.profile, probe);
  out.exps = make_exponent_data(spec, classification_of(out.fit.tail));
  out.profile.A = out.exps.A;
  decay_diagnostic(out.profile, out.exps);
  return out;
}

std::string profile_csv(const HarmonicProfile& prof) {
  std::ostringstream os;
  os << std::setprecision(16) << std::scientific;
  os << "# c_star=" << prof.c_star << "\n# tail=" << to_string(prof.tail)
     << "\n# delta_fit=" << prof.delta_fit << "\nr,U,dU,U_d,nu_d\n";
  for (std::size_t i = 0; i < prof.r.size(); ++i) {
    const double ud = prof.U[i] * std::pow(prof.r[i], -prof.A);
    os << prof.r[i] << ',' << prof.U[i] << ',' << prof.dU[i] << ',' << ud << ',' << ud * ud
       << '\n';
  }
  return os.str();
}

}  // namespace heatlab
