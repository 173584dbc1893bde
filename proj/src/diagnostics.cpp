#include "heatlab/diagnostics.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "heatlab/error.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

namespace {

double interpolate_star(const EvolutionGrid& grid, const std::vector<double>& values, double r) {
  if (r <= 0.0) return center_value(grid, values);
  std::vector<double> rr(grid.size() + 1), vv(grid.size() + 1);
  rr[0] = 0.0;
  vv[0] = center_value(grid, values);
  std::copy(grid.r.begin(), grid.r.end(), rr.begin() + 1);
  std::copy(values.begin(), values.end(), vv.begin() + 1);
  return num::MonotoneCubic(std::move(rr), std::move(vv))(r);
}

}  // namespace

double richardson_limit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 3) throw Error(ErrorKind::NeedMoreCheckpoints, "extrapolation needs 3 points");
  std::vector<double> one(x.size(), 1.0), x1 = x, x2(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x2[i] = x[i] * x[i];
  return num::least_squares({one, x1, x2}, y)[0];
}

LimitReport theorem_limits(const DiagnosticsTrace& trace, const HarmonicSetup& setup, double m,
                           const LimitOptions& options) {
  if (trace.points.size() < 2) throw Error(ErrorKind::NeedMoreCheckpoints, "trace too short");
  LimitReport rep;
  const auto& exps = setup.exps;
  const double d = exps.d;
  const double cstar = setup.profile.c_star;
  const double cd = hermite_normalization(d);
  const auto& last = trace.points.back();
  rep.classification = exps.classification;
  rep.m = m;
  rep.s_end = last.s;
  rep.a_end = last.a;
  rep.a_error = std::abs(last.a - m);

  double early_sup = 0.0, late_sup = 0.0;
  for (const auto& c : trace.points) {
    if (c.s <= 2.0) early_sup = std::max(early_sup, c.w_norm);
    else late_sup = std::max(late_sup, c.w_norm);
    rep.norm_growth_constant =
        std::max(rep.norm_growth_constant, c.w_norm / trace.points.front().w_norm);
  }
  rep.norm_bounded = late_sup <= early_sup * (1.0 + 1e-9);
  double prev = -1.0;
  for (const auto& c : trace.points) {
    if (c.s < 4.0) continue;
    const double e = std::abs(c.a - m);
    if (prev >= 0.0 && e > prev + 1e-6 * std::abs(m)) rep.a_monotone = false;
    prev = e;
  }

  if (std::abs(m) <= options.zero_mass_threshold * trace.points.front().w_norm) {
    rep.rate_mode = true;
    std::vector<double> s, y;
    for (const auto& c : trace.points)
      if (c.s >= options.rate_window_lo - 1e-9) {
        s.push_back(c.s);
        y.push_back(std::log(c.w_norm));
      }
    rep.decay_rate = -num::fit_line(s, y).slope;
    return rep;
  }

  const auto& xi = last.w.r;
  if (exps.classification == Classification::Sstar) {
    std::vector<double> targets = options.richardson_s;
    if (targets.empty())
      for (int k = 3; k >= 0; --k) targets.push_back(last.s * (1.0 - k / 6.0));
    std::vector<const Checkpoint*> cps;
    for (double s : targets) cps.push_back(&trace.at(s));
    // U ~ c* (log r + b/c*): the logarithmic corrections are expanded in
    // 1/(log t + beta) rather than 1/log t, with beta = 2b/c* from the tail fit.
    const double beta = 2.0 * setup.profile.tail_offset / cstar;
    std::vector<double> inv_s, inv_log;
    for (const auto* c : cps) {
      inv_s.push_back(1.0 / (c->s + beta));
      inv_log.push_back(1.0 / (std::log(c->t) + beta));
    }
    const double c2 = hermite_normalization(2.0);
    for (std::size_t i = 0; i < xi.size(); ++i) {
      if (xi[i] < options.xi_lo || xi[i] > options.xi_hi) continue;
      std::vector<double> y;
      for (const auto* c : cps) y.push_back((c->s + beta) * c->w.values[i]);
      const double lim = richardson_limit(inv_s, y);
      const double expected = 2.0 * m * c2 * std::exp(-0.25 * xi[i] * xi[i]);
      rep.profile_sup_error = std::max(rep.profile_sup_error, std::abs(lim - expected));
    }
    rep.profile_scale = 2.0 * std::abs(m) * c2;
    std::vector<double> yc, yd;
    for (const auto* c : cps) {
      const double lt = std::log(c->t) + beta;
      yc.push_back(c->t * lt * lt * c->center);
      yd.push_back(c->t * c->t * lt * lt * c->center_dt);
    }
    const double expected_center = 2.0 * std::numbers::sqrt2 * m / cstar;
    rep.center_ratio = richardson_limit(inv_log, yc) / expected_center;
    rep.center_dt_ratio = richardson_limit(inv_log, yd) / -expected_center;
  } else {
    for (std::size_t i = 0; i < xi.size(); ++i) {
      if (xi[i] < options.xi_lo || xi[i] > options.xi_hi) continue;
      const double expected = m * cd * std::exp(-0.25 * xi[i] * xi[i]);
      rep.profile_sup_error = std::max(rep.profile_sup_error, std::abs(last.w.values[i] - expected));
    }
    rep.profile_scale = std::abs(m) * cd;
    const double t = last.t;
    rep.center_ratio = std::pow(t, 0.5 * d) * last.center * cstar / (cd * m);
    rep.center_dt_ratio = std::pow(t, 0.5 * d + 1.0) * last.center_dt * 2.0 * cstar / (-d * cd * m);
  }
  rep.profile_relative_error = rep.profile_sup_error / rep.profile_scale;
  return rep;
}

GdReport g_d_check(const DiagnosticsTrace& trace, const EvolutionGrid& grid,
                   const HarmonicSetup& setup, const std::vector<double>& times, double r_lo,
                   double r_hi) {
  if (times.size() < 2) throw Error(ErrorKind::NeedMoreCheckpoints, "G_d fit needs two times");
  GdReport rep;
  rep.alpha_expected = -0.5 * setup.exps.d - 2.0;
  const double t0 = *std::min_element(times.begin(), times.end());
  const double lo = r_lo * std::sqrt(t0), hi = r_hi * std::sqrt(t0);
  std::vector<double> one, lt, lr, y;
  std::vector<double> d1x, d1y, d2x, d2y;
  for (double t : times) {
    const auto& c = trace.at(std::log1p(t), 2e-3);
    std::vector<double> G(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      G[i] = c.star.values[i] - (c.center + c.center_dt * setup.profile.F(grid.r[i]));
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      const double r = grid.r[i];
      if (r < lo || r > hi) continue;
      one.push_back(1.0);
      lt.push_back(std::log(c.t));
      lr.push_back(std::log(r));
      y.push_back(std::log(std::abs(G[i])));
      if (t == t0) {
        const double dr1 = grid.r[i] - grid.r[i - 1], dr2 = grid.r[i + 1] - grid.r[i];
        const double g1 = (G[i + 1] - G[i - 1]) / (dr1 + dr2);
        const double g2 = 2.0 * ((G[i + 1] - G[i]) / dr2 - (G[i] - G[i - 1]) / dr1) / (dr1 + dr2);
        d1x.push_back(std::log(r));
        d1y.push_back(std::log(std::abs(g1)));
        d2x.push_back(std::log(r));
        d2y.push_back(std::log(std::abs(g2)));
      }
    }
  }
  if (y.size() < 4) throw Error(ErrorKind::NeedMoreCheckpoints, "too few samples for the G_d fit");
  const auto coef = num::least_squares({one, lt, lr}, y);
  rep.log_c = coef[0];
  rep.alpha = coef[1];
  rep.beta = coef[2];
  double ss = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double e = y[k] - coef[0] - coef[1] * lt[k] - coef[2] * lr[k];
    ss += e * e;
  }
  rep.rms = std::sqrt(ss / y.size());
  rep.samples = y.size();
  rep.beta_d1 = num::fit_line(d1x, d1y).slope;
  rep.beta_d2 = num::fit_line(d2x, d2y).slope;
  return rep;
}

EnvelopeReport supersolution_envelope(const DiagnosticsTrace& trace, const EvolutionGrid& grid,
                                      const HarmonicSetup& setup, double D, double D_prime,
                                      double eps, double s_from) {
  EnvelopeReport rep;
  rep.eps = eps;
  const double d = setup.exps.d;
  const double g1 = D + 0.25 * d;
  const double g2 = D_prime + (setup.exps.classification == Classification::Sstar ? 1.0 : 0.0);
  rep.gamma = g1;
  const double kappa = g1 + g2 / std::numbers::ln2;
  const auto zeta = [&](double t) { return std::pow(t, -g1) * std::pow(std::log(2.0 + t), -g2); };
  const auto dzeta = [&](double t) {
    return -zeta(t) * (g1 / t + g2 / ((2.0 + t) * std::log(2.0 + t)));
  };
  // Discrete F: the cumulative flux identity makes -L_h F = 1 hold cell by cell.
  std::vector<double> F(grid.size());
  F[0] = setup.profile.F(grid.r[0]);
  double enclosed = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    enclosed += grid.mass[i];
    F[i + 1] = F[i] + enclosed / grid.trans[i];
  }
  const double reach_end = eps * std::sqrt(trace.points.back().t);
  for (std::size_t i = 0; i < grid.size() && grid.r[i] <= reach_end; ++i)
    rep.discrete_F_deviation =
        std::max(rep.discrete_F_deviation, std::abs(F[i] - setup.profile.F(grid.r[i])));
  rep.discrete_F_deviation /= setup.profile.F(reach_end);

  // W* is affine in F, so L_h W* follows from L_h F without cancelling the constant part.
  const auto LF = time_derivative(grid, F);

  std::vector<double> lt, ls;
  rep.min_residual = std::numeric_limits<double>::infinity();
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  for (const auto& c : trace.points) {
    if (c.s < s_from) continue;
    const double t = c.t, z = zeta(t), dz = dzeta(t);
    const double reach = eps * std::sqrt(t);
    double sup = std::abs(c.center);
    std::vector<double> W(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) W[i] = 2.0 * z * (1.0 - kappa * F[i] / t);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      const double dW = 2.0 * dz * (1.0 - kappa * F[i] / t) + 2.0 * z * kappa * F[i] / (t * t);
      const double LW = -2.0 * z * kappa / t * LF[i];
      rep.min_residual = std::min(rep.min_residual, (dW - LW) / (z / t));
      if (grid.r[i] > reach) continue;
      sup = std::max(sup, std::abs(c.star.values[i]));
      rep.min_ratio = std::min(rep.min_ratio, W[i] / z);
      rep.max_ratio = std::max(rep.max_ratio, W[i] / z);
    }
    rep.constant = std::max(rep.constant, sup / z);
    lt.push_back(std::log(t));
    ls.push_back(std::log(sup));
  }
  if (lt.size() >= 2) rep.fitted_exponent = num::fit_line(lt, ls).slope;
  return rep;
}

double selfsimilar_exact_error(const Checkpoint& c, const EvolutionGrid& grid, double d) {
  double err = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r[i];
    const double exact = std::pow(1.0 + c.t, -0.5 * d) * std::exp(-0.25 * r * r / (1.0 + c.t));
    err = std::max(err, std::abs(c.star.values[i] - exact) * grid.U[i]);
    peak = std::max(peak, exact * grid.U[i]);
  }
  return err / peak;
}

double hardy_radial_kernel(int N, double lambda, double r, double rho, double t) {
  const double nu = std::sqrt(0.25 * (N - 2.0) * (N - 2.0) + lambda);
  const double half = 0.5 * (N - 2.0);
  const double z = r * rho / (2.0 * t);
  double value;
  if (z < 1e-8) {
    // I_nu(z) ~ (z/2)^nu / Gamma(nu + 1)
    const double prod = r * rho;
    const double lead = (prod == 0.0 && std::abs(nu - half) < 1e-14)
                            ? 1.0
                            : std::pow(prod, nu - half);
    value = lead * std::pow(4.0 * t, -nu) / std::tgamma(nu + 1.0) / (2.0 * t) *
            std::exp(-(r * r + rho * rho) / (4.0 * t));
  } else if (z > 600.0) {
    const double mu = 4.0 * nu * nu;
    const double series = 1.0 - (mu - 1.0) / (8.0 * z) + (mu - 1.0) * (mu - 9.0) / (128.0 * z * z);
    value = std::pow(r * rho, -half) / (2.0 * t) * std::exp(-(r - rho) * (r - rho) / (4.0 * t)) *
            series / std::sqrt(2.0 * std::numbers::pi * z);
  } else {
    value = std::pow(r * rho, -half) / (2.0 * t) * std::exp(-(r * r + rho * rho) / (4.0 * t)) *
            boost::math::cyl_bessel_i(nu, z);
  }
  return value / sphere_area(N);
}

KernelProbe kernel_probe(const HarmonicSetup& setup, const SelfSimilarFrame& frame, double y,
                         double tau, const std::vector<double>& x, double s_end, double ds) {
  const auto& prof = setup.profile;
  const int N = prof.N();
  const double d = setup.exps.d;
  const bool log_case = setup.exps.classification == Classification::Sstar;
  const auto norm = normalization_constants(N, setup.exps.A);
  KernelProbe out;
  out.y = y;
  out.x = x;
  out.tau = {tau, 0.5 * tau};
  out.expected = (log_case ? 4.0 : 1.0) / (prof.c_star * prof.c_star * norm.kappa);

  Schedule sched;
  sched.ds = ds;
  sched.s_end = s_end;
  sched.checkpoint_every = 1.0;
  const double oracle_s = 1.0;
  const bool has_oracle = prof.potential().kind() == PotentialKind::Free ||
                          prof.potential().kind() == PotentialKind::Hardy;

  for (double width_tau : out.tau) {
    RunOptions opts;
    const double r_max = 1.02 * frame.xi_max() * std::exp(0.5 * s_end) + 1.0;
    const double spacing = (y + opts.r_c) * std::expm1(opts.h);
    if (std::sqrt(width_tau) < 4.0 * spacing)
      throw Error(ErrorKind::ResolutionError, "ring width under-resolved by the radial grid");
    opts.r_max = r_max;
    opts.keep_selfsim = false;
    const auto data = InitialData::ring(prof, y, width_tau);
    const auto res = run(setup, data, sched, frame, opts);
    const auto& last = res.trace.points.back();
    const double t = last.t;
    const double lt = std::log(t);
    const double factor = log_case ? t * lt * lt : std::pow(t, 0.5 * d);
    std::vector<double> est;
    for (double xv : x)
      est.push_back(factor * interpolate_star(res.grid, last.star.values, xv) / prof.value(y));
    out.estimates.push_back(est);

    if (has_oracle && width_tau == out.tau.back()) {
      const auto& c = res.trace.at(oracle_s, 2e-3);
      const double lambda = prof.potential().lambda1();
      double worst = 0.0;
      for (double xv : x) {
        if (xv <= 0.0) continue;
        const double lo = std::max(1e-12, y - 20.0 * std::sqrt(width_tau));
        const double hi = y + 20.0 * std::sqrt(width_tau);
        const double exact = num::integrate(
            [&](double rho) {
              return hardy_radial_kernel(N, lambda, xv, rho, c.t) * prof.value(rho) *
                     data.star(rho) * sphere_area(N) * std::pow(rho, N - 1);
            },
            lo, hi, 200, 8);
        const double numeric = prof.value(xv) * interpolate_star(res.grid, c.star.values, xv);
        worst = std::max(worst, std::abs(numeric - exact) / std::abs(exact));
      }
      out.oracle_relative_error = worst;
    }
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double e = 2.0 * out.estimates[1][k] - out.estimates[0][k];
    out.extrapolated.push_back(e);
    out.max_relative_error = std::max(out.max_relative_error, std::abs(e / out.expected - 1.0));
  }
  return out;
}

}  // namespace heatlab
