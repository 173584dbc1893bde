#include "heatlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "heatlab/error.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

double EvolutionGrid::weighted_mass(const std::vector<double>& star) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += mass[i] * star[i];
  return s;
}

EvolutionGrid EvolutionGrid::build(const HarmonicProfile& profile, double r_max, double h,
                                   double r_c) {
  if (r_max > profile.r_max() * (1.0 + 1e-12))
    throw Error(ErrorKind::DomainExhausted, "evolution domain exceeds the harmonic profile grid");
  EvolutionGrid g;
  g.N = profile.N();
  const int cells = static_cast<int>(std::ceil(std::log1p(r_max / r_c) / h));
  g.faces.resize(cells + 1);
  for (int j = 0; j <= cells; ++j) g.faces[j] = r_c * std::expm1(j * h);
  g.faces.back() = std::min(g.faces.back(), profile.r_max());
  g.r.resize(cells);
  g.mass.resize(cells);
  g.U.resize(cells);
  g.trans.resize(cells - 1);
  const int N = g.N;
  const auto W = [&](double r) {
    const double u = profile.value(r);
    return std::pow(r, N - 1) * u * u;
  };
  for (int i = 0; i < cells; ++i) {
    g.r[i] = r_c * std::expm1((i + 0.5) * h);
    g.U[i] = profile.value(g.r[i]);
    g.mass[i] = i == 0 ? profile.weight_integral(g.faces[1])
                       : num::integrate(W, g.faces[i], g.faces[i + 1], 1, 8);
  }
  for (int i = 0; i + 1 < cells; ++i) {
    const double resist = num::integrate(
        [&](double x) {
          const double r = std::exp(x);
          return r / W(r);
        },
        std::log(g.r[i]), std::log(g.r[i + 1]), i < 8 ? 4 : 2, 8);
    g.trans[i] = 1.0 / resist;
  }
  return g;
}

RadialField step(const RadialField& field, const EvolutionGrid& grid, double dt,
                 TimeScheme scheme) {
  const std::size_t n = grid.size();
  if (field.values.size() != n) throw Error(ErrorKind::GridMismatch, "field not on the grid");
  if (!(dt > 0.0)) throw Error(ErrorKind::OutOfRange, "time step must be positive");
  const double theta = scheme == TimeScheme::CrankNicolson ? 0.5 : 1.0;
  const auto& u = field.values;
  std::vector<double> lower(n, 0.0), diag(n), upper(n, 0.0), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ku = 0.0, kd = 0.0;
    if (i > 0) {
      ku += grid.trans[i - 1] * (u[i] - u[i - 1]);
      kd += grid.trans[i - 1];
      lower[i] = -theta * dt * grid.trans[i - 1];
    }
    if (i + 1 < n) {
      ku += grid.trans[i] * (u[i] - u[i + 1]);
      kd += grid.trans[i];
      upper[i] = -theta * dt * grid.trans[i];
    }
    diag[i] = grid.mass[i] + theta * dt * kd;
    rhs[i] = grid.mass[i] * u[i] - (1.0 - theta) * dt * ku;
  }
  if (!num::solve_tridiagonal(lower, diag, upper, rhs))
    throw Error(ErrorKind::SolverError, "zero pivot in the implicit step");
  for (double v : rhs)
    if (!std::isfinite(v)) throw Error(ErrorKind::NumericalBlowup, "non-finite value after step");
  RadialField out = field;
  out.values = std::move(rhs);
  out.t = field.t + dt;
  out.s = std::log1p(out.t);
  return out;
}

std::vector<double> time_derivative(const EvolutionGrid& grid, const std::vector<double>& u) {
  const std::size_t n = grid.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ku = 0.0;
    if (i > 0) ku += grid.trans[i - 1] * (u[i] - u[i - 1]);
    if (i + 1 < n) ku += grid.trans[i] * (u[i] - u[i + 1]);
    out[i] = -ku / grid.mass[i];
  }
  return out;
}

double center_value(const EvolutionGrid& grid, const std::vector<double>& values) {
  return num::extrapolate_to_origin(std::span(grid.r).first(3), std::span(values).first(3));
}

InitialData InitialData::self_similar() {
  return {[](double r) { return std::exp(-0.25 * r * r); }, "self_similar", 40.0};
}

InitialData InitialData::bump() {
  return {[](double r) { return (1.0 + 0.5 * r * r) * std::exp(-0.5 * r * r); }, "bump", 30.0};
}

InitialData InitialData::zero_mass(const EvolutionGrid& grid) {
  const auto g1 = [](double r) { return std::exp(-0.5 * r * r); };
  const auto g2 = [](double r) { return std::exp(-r * r); };
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    m1 += grid.mass[i] * g1(grid.r[i]);
    m2 += grid.mass[i] * g2(grid.r[i]);
  }
  const double c = m1 / m2;
  return {[=](double r) { return g1(r) - c * g2(r); }, "zero_mass", 30.0};
}

InitialData InitialData::ring(const HarmonicProfile& profile, double y, double tau) {
  const int N = profile.N();
  const double width = std::sqrt(tau);
  const auto g = [=](double r) { return std::exp(-(r - y) * (r - y) / (4.0 * tau)); };
  const double lo = std::max(0.0, y - 20.0 * width), hi = y + 20.0 * width;
  const double norm =
      sphere_area(N) * num::integrate([&](double r) { return g(r) * std::pow(r, N - 1); }, lo, hi,
                                      64, 8);
  const HarmonicProfile* prof = &profile;
  std::ostringstream label;
  label << "ring(y=" << y << ",tau=" << tau << ")";
  return {[=](double r) {
            if (r < lo || r > hi) return 0.0;
            return g(r) / norm / prof->value(r);
          },
          label.str(), hi};
}

SelfSimilarFrame SelfSimilarFrame::make(double d, int count, SpectralGrid grid) {
  SelfSimilarFrame f;
  f.d = d;
  f.eig = eigensolve(assemble(d, BoundaryKind::NaturalH1, grid), count);
  return f;
}

RadialField to_selfsim(const RadialField& star, const EvolutionGrid& grid,
                       const HarmonicProfile& profile, const ExponentData& exps,
                       const std::vector<double>& xi) {
  if (star.gauge != Gauge::Star) throw Error(ErrorKind::GridMismatch, "expected star gauge");
  const double scale = std::sqrt(1.0 + star.t);
  if (xi.back() * scale > grid.r.back() * (1.0 + 1e-12))
    throw Error(ErrorKind::DomainExhausted, "xi grid reaches beyond the evolution domain");
  std::vector<double> rr(grid.size() + 1), vv(grid.size() + 1);
  rr[0] = 0.0;
  vv[0] = center_value(grid, star.values);
  std::copy(grid.r.begin(), grid.r.end(), rr.begin() + 1);
  std::copy(star.values.begin(), star.values.end(), vv.begin() + 1);
  const num::MonotoneCubic interp(std::move(rr), std::move(vv));
  const double amp = std::pow(1.0 + star.t, 0.5 * exps.d);
  RadialField w;
  w.gauge = Gauge::SelfSim;
  w.r = xi;
  w.values.resize(xi.size());
  w.t = star.t;
  w.s = std::log1p(star.t);
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double r = xi[i] * scale;
    const double ud = profile.value(r) * std::pow(r, -exps.A);
    w.values[i] = amp * ud * interp(r);
  }
  return w;
}

double project_a(const RadialField& w, const SelfSimilarFrame& frame) {
  double a = 0.0;
  const auto& psi = frame.eig.vectors[0];
  for (std::size_t i = 0; i < psi.size(); ++i) a += frame.eig.mass[i] * w.values[i] * psi[i];
  return a;
}

double weighted_norm(const RadialField& w, const SelfSimilarFrame& frame) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i)
    s += frame.eig.mass[i] * w.values[i] * w.values[i];
  return std::sqrt(s);
}

const Checkpoint& DiagnosticsTrace::at(double s, double tolerance) const {
  const auto it = std::min_element(points.begin(), points.end(), [s](const auto& a, const auto& b) {
    return std::abs(a.s - s) < std::abs(b.s - s);
  });
  if (it == points.end() || std::abs(it->s - s) > tolerance)
    throw Error(ErrorKind::NeedMoreCheckpoints, "no checkpoint at the requested s");
  return *it;
}

RunResult run(const HarmonicSetup& setup, const InitialData& data, const Schedule& schedule,
              const SelfSimilarFrame& frame, const RunOptions& options) {
  const auto& prof = setup.profile;
  double r_max = options.r_max;
  if (r_max <= 0.0) r_max = 1.02 * frame.xi_max() * std::exp(0.5 * schedule.s_end) + 1.0;
  RunResult out{EvolutionGrid::build(prof, r_max, options.h, options.r_c), {}};
  const auto& grid = out.grid;

  std::vector<double> init(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) init[i] = data.star(grid.r[i]);
  RadialField field = RadialField::at_time(Gauge::Star, grid.r, init, 0.0);

  const long total = std::lround(schedule.s_end / schedule.ds);
  const long every = std::max(1L, std::lround(schedule.checkpoint_every / schedule.ds));
  std::vector<long> extra;
  for (double s : schedule.extra_checkpoints) extra.push_back(std::lround(s / schedule.ds));

  auto& trace = out.trace;
  trace.initial_mass = grid.weighted_mass(field.values);
  // Sign-changing data can have vanishing mass; drift is measured against sum m_i |u_i|.
  double abs_mass = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) abs_mass += grid.mass[i] * std::abs(field.values[i]);
  const double mass_scale = std::max(abs_mass, 1e-300);
  double mass_prev = trace.initial_mass;
  double min_rel = 0.0;

  const auto record = [&](long k) {
    Checkpoint c;
    c.s = k * schedule.ds;
    c.t = std::expm1(c.s);
    field.t = c.t;
    field.s = c.s;
    c.star = field;
    c.star_dt = time_derivative(grid, field.values);
    c.center = center_value(grid, field.values);
    c.center_dt = center_value(grid, c.star_dt);
    c.mass = grid.weighted_mass(field.values);
    c.w = to_selfsim(field, grid, prof, setup.exps, frame.eig.xi);
    c.a = project_a(c.w, frame);
    c.w_norm = weighted_norm(c.w, frame);
    if (!options.keep_selfsim) c.w.values.clear();
    trace.points.push_back(std::move(c));
  };

  record(0);
  int startup = schedule.startup_steps;
  for (long k = 0; k < total; ++k) {
    const double t0 = std::expm1(k * schedule.ds);
    const double t1 = std::expm1((k + 1) * schedule.ds);
    const long kk = k + 1;
    const bool lands = kk % every == 0 || kk == total ||
                       std::find(extra.begin(), extra.end(), kk) != extra.end();
    if (startup > 0 || (lands && options.smooth_checkpoints)) {
      const double half = 0.5 * (t1 - t0);
      field = step(field, grid, half, TimeScheme::BackwardEuler);
      field = step(field, grid, t1 - t0 - half, TimeScheme::BackwardEuler);
      if (startup > 0) --startup;
    } else {
      field = step(field, grid, t1 - t0, options.scheme);
    }
    field.t = t1;
    field.s = (k + 1) * schedule.ds;
    const double m = grid.weighted_mass(field.values);
    trace.max_step_drift = std::max(trace.max_step_drift, std::abs(m - mass_prev) / mass_scale);
    trace.max_mass_drift =
        std::max(trace.max_mass_drift, std::abs(m - trace.initial_mass) / mass_scale);
    mass_prev = m;
    double lo = field.values[0], hi = field.values[0];
    for (double v : field.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi > 0.0) min_rel = std::min(min_rel, lo / hi);
    if (lands) record(kk);
  }
  trace.min_relative_value = min_rel;
  return out;
}

MassFunctionals m_of_phi(const InitialData& data, const HarmonicSetup& setup,
                         const EvolutionGrid* grid) {
  const auto& prof = setup.profile;
  const int N = prof.N();
  const auto norm = normalization_constants(N, setup.exps.A);
  // phi U r^{N-1} = phi* U^2 r^{N-1}.
  const auto integrand = [&](double r) {
    const double u = prof.value(r);
    return data.star(r) * u * u * std::pow(r, N - 1);
  };
  const double hi = std::min(data.support, prof.r_max());
  MassFunctionals out;
  out.integral = num::integrate_log(integrand, 1e-9, hi, 64, 8);
  out.m = norm.c_d / prof.c_star * out.integral;
  out.M = sphere_area(N) / (prof.c_star * norm.kappa) * out.integral;
  if (grid) out.m_discrete = norm.c_d / prof.c_star * grid->weighted_mass([&] {
                               std::vector<double> v(grid->size());
                               for (std::size_t i = 0; i < v.size(); ++i) v[i] = data.star(grid->r[i]);
                               return v;
                             }());
  return out;
}

std::string field_csv(const RadialField& field) {
  std::ostringstream os;
  os << std::setprecision(16) << std::scientific;
  os << (field.gauge == Gauge::SelfSim ? "xi" : "r") << ",value,gauge,stamp\n";
  const double stamp = field.gauge == Gauge::SelfSim ? field.s : field.t;
  for (std::size_t i = 0; i < field.r.size(); ++i)
    os << field.r[i] << ',' << field.values[i] << ',' << to_string(field.gauge) << ',' << stamp
       << '\n';
  return os.str();
}

}  // namespace heatlab
