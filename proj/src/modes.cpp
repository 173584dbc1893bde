#include "heatlab/modes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <sstream>

#include "heatlab/error.hpp"
#include "heatlab/numerics.hpp"
#include "heatlab/report.hpp"

namespace heatlab {

namespace {

constexpr double kPi = std::numbers::pi;

double radial_energy(const std::function<double(double)>& f, int N, double hi) {
  return num::integrate_log([&](double r) { return f(r) * f(r) * std::pow(r, N - 1); }, 1e-6, hi,
                            32, 8);
}

double sup_abs(const ModeRun& run, std::size_t index) {
  const auto& grid = run.result.grid;
  const auto& star = run.result.trace.points[index].star.values;
  double sup = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) sup = std::max(sup, std::abs(grid.U[j] * star[j]));
  return sup;
}

}  // namespace

double angular_harmonic(int N, int k, int i, const Direction& dir) {
  if (k < 0) throw Error(ErrorKind::OutOfRange, "negative harmonic order");
  if (N == 2) {
    if (k == 0) return 1.0 / std::sqrt(2.0 * kPi);
    if (i == 1) return std::cos(k * dir.theta) / std::sqrt(kPi);
    if (i == 2) return std::sin(k * dir.theta) / std::sqrt(kPi);
    throw Error(ErrorKind::OutOfRange, "harmonic index out of range");
  }
  if (N == 3) {
    if (i < 1 || i > 2 * k + 1) throw Error(ErrorKind::OutOfRange, "harmonic index out of range");
    const int m = i - k - 1;
    const unsigned km = static_cast<unsigned>(std::abs(m));
    const double p = std::sph_legendre(static_cast<unsigned>(k), km, dir.theta);
    if (m == 0) return p;
    const double phase = m > 0 ? std::cos(m * dir.azimuth) : std::sin(-m * dir.azimuth);
    return std::numbers::sqrt2 * p * phase;
  }
  throw Error(ErrorKind::OutOfRange, "angular bases exist for N = 2 and N = 3 only");
}

SphereQuadrature SphereQuadrature::make(int N, int order) {
  SphereQuadrature q;
  q.N = N;
  if (N == 2) {
    for (int j = 0; j < order; ++j) {
      q.nodes.push_back({2.0 * kPi * j / order, 0.0});
      q.weights.push_back(2.0 * kPi / order);
    }
    return q;
  }
  if (N != 3) throw Error(ErrorKind::OutOfRange, "angular bases exist for N = 2 and N = 3 only");
  const auto gl = num::gauss_legendre(order);
  const int n_az = 2 * order;
  for (std::size_t a = 0; a < gl.nodes.size(); ++a)
    for (int b = 0; b < n_az; ++b) {
      q.nodes.push_back({std::acos(gl.nodes[a]), 2.0 * kPi * b / n_az});
      q.weights.push_back(gl.weights[a] * 2.0 * kPi / n_az);
    }
  return q;
}

double ModeExpansion::parseval_defect() const {
  if (total_energy <= 0.0) return 0.0;
  return std::abs(total_energy - retained_energy) / total_energy;
}

double ModeExpansion::assemble(double rr, const Direction& dir) const {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.coefficient(rr) * angular_harmonic(N, e.k, e.i, dir);
  return sum;
}

std::string ModeExpansion::csv() const {
  std::ostringstream out;
  out << "k,i,r,coefficient\n";
  for (const auto& e : entries)
    for (std::size_t j = 0; j < r.size(); ++j)
      out << e.k << ',' << e.i << ',' << format_number(r[j]) << ',' << format_number(e.values[j])
          << '\n';
  return out.str();
}

ModeExpansion decompose(const AngularData& phi, int N, int truncation, std::vector<double> r,
                        int angular_order) {
  if (N != 2 && N != 3)
    throw Error(ErrorKind::OutOfRange, "angular bases exist for N = 2 and N = 3 only");
  if (truncation < 1) throw Error(ErrorKind::OutOfRange, "truncation order must be positive");
  if (angular_order <= 0)
    angular_order = N == 2 ? std::max(64, 4 * truncation) : std::max(32, 2 * truncation);
  if (r.empty())
    for (int j = 0; j <= 400; ++j) r.push_back(0.05 * j);

  ModeExpansion ex;
  ex.N = N;
  ex.truncation = truncation;
  ex.r = r;
  const auto quad = std::make_shared<SphereQuadrature>(SphereQuadrature::make(N, angular_order));
  const double hi = 40.0;

  ex.total_energy = radial_energy(
      [&](double rr) {
        double s = 0.0;
        for (std::size_t q = 0; q < quad->nodes.size(); ++q) {
          const double v = phi(rr, quad->nodes[q]);
          s += quad->weights[q] * v * v;
        }
        return std::sqrt(s);
      },
      N, hi);

  std::vector<double> kept_by_k(truncation, 0.0);
  for (int k = 0; k < truncation; ++k) {
    const long count = sphere_eigenvalue(N, k).multiplicity;
    for (int i = 1; i <= count; ++i) {
      std::vector<double> q_values(quad->nodes.size());
      for (std::size_t q = 0; q < quad->nodes.size(); ++q)
        q_values[q] = quad->weights[q] * angular_harmonic(N, k, i, quad->nodes[q]);
      ModeEntry e;
      e.k = k;
      e.i = i;
      e.coefficient = [phi, quad, q_values](double rr) {
        double s = 0.0;
        for (std::size_t q = 0; q < q_values.size(); ++q) s += q_values[q] * phi(rr, quad->nodes[q]);
        return s;
      };
      e.energy = radial_energy(e.coefficient, N, hi);
      if (e.energy <= 1e-24 * ex.total_energy) continue;
      for (double x : r) e.values.push_back(e.coefficient(x));
      ex.retained_energy += e.energy;
      kept_by_k[k] += e.energy;
      ex.entries.push_back(std::move(e));
    }
  }
  if (ex.total_energy > 0.0) {
    double top = kept_by_k[truncation - 1];
    if (truncation >= 2) top += kept_by_k[truncation - 2];
    ex.top_fraction = truncation >= 3 ? top / ex.total_energy : 0.0;
    if (ex.top_fraction > 0.1)
      warn("TruncationWarning: the two highest retained orders carry " +
           std::to_string(100.0 * ex.top_fraction) + "% of the energy");
  }
  return ex;
}

double ModeRun::value(std::size_t index, double r) const {
  const auto& grid = result.grid;
  const auto& star = result.trace.points.at(index).star.values;
  if (r > grid.r.back()) return 0.0;
  std::vector<double> rr(grid.size() + 1), vv(grid.size() + 1);
  rr[0] = 0.0;
  vv[0] = center_value(grid, star);
  std::copy(grid.r.begin(), grid.r.end(), rr.begin() + 1);
  std::copy(star.begin(), star.end(), vv.begin() + 1);
  const double u = r > 0.0 ? setup.profile.value(r) : (setup.profile.a0() == 0.0 ? 1.0 : 0.0);
  return u * num::MonotoneCubic(std::move(rr), std::move(vv))(r);
}

std::size_t ModeEvolution::checkpoint(double s_value) const {
  for (std::size_t j = 0; j < s.size(); ++j)
    if (std::abs(s[j] - s_value) < 1e-6) return j;
  throw Error(ErrorKind::NeedMoreCheckpoints, "no checkpoint at the requested s");
}

double ModeEvolution::assemble(std::size_t index, double r, const Direction& dir) const {
  double sum = 0.0;
  for (const auto& m : modes) sum += m.value(index, r) * angular_harmonic(N, m.k, m.i, dir);
  return sum;
}

ModeEvolution evolve_modes(const ModeExpansion& expansion, const PotentialSpec& base,
                           const Schedule& schedule, const ModeRunOptions& options) {
  if (base.N() != expansion.N) throw Error(ErrorKind::GridMismatch, "dimension mismatch");
  ModeEvolution ev;
  ev.N = expansion.N;
  for (const auto& e : expansion.entries) {
    ModeRun run;
    run.k = e.k;
    run.i = e.i;
    // Runs at the same order share the profile and the frame.
    const auto same = std::find_if(ev.modes.begin(), ev.modes.end(),
                                   [&](const ModeRun& m) { return m.k == e.k; });
    if (same != ev.modes.end()) {
      run.setup = same->setup;
      run.frame = same->frame;
    } else {
      run.setup = prepare(shifted_potential(base, e.k));
      run.frame = SelfSimilarFrame::make(run.setup.exps.d, 3);
    }
    InitialData data;
    const auto& prof = run.setup.profile;
    const auto coefficient = e.coefficient;
    data.star = [coefficient, &prof](double r) { return coefficient(r) / prof.value(r); };
    data.label = "mode k=" + std::to_string(e.k) + " i=" + std::to_string(e.i);
    run.result = heatlab::run(run.setup, data, schedule, run.frame, options.run);
    data.star = nullptr;

    std::vector<double> x, y;
    for (std::size_t j = 0; j < run.result.trace.points.size(); ++j) {
      const auto& c = run.result.trace.points[j];
      if (c.s < options.fit_from - 1e-9) continue;
      x.push_back(0.5 * std::log(c.t));
      y.push_back(std::log(sup_abs(run, j)));
    }
    if (x.size() >= 2) run.decay_exponent = -num::fit_line(x, y).slope;
    run.expected_decay = ev.N + run.setup.exps.A;
    ev.modes.push_back(std::move(run));
  }
  if (!ev.modes.empty())
    for (const auto& c : ev.modes.front().result.trace.points) ev.s.push_back(c.s);
  return ev;
}

RemainderReport remainder_bound(const ModeEvolution& evolution, const PotentialSpec& base, int m,
                                double fit_from) {
  RemainderReport rep;
  rep.m = m;
  const int N = base.N();
  const double omega = sphere_eigenvalue(N, m).omega;
  rep.d_m = N + 2.0 * critical_exponents(N, base.lambda2() + omega).plus;
  rep.expected_exponent = 0.25 * rep.d_m;
  std::vector<const ModeRun*> tail;
  for (const auto& run : evolution.modes)
    if (run.k >= m) tail.push_back(&run);
  rep.vanishes = tail.empty();
  if (rep.vanishes) return rep;
  std::vector<double> x, y;
  for (std::size_t j = 0; j < evolution.s.size(); ++j) {
    if (evolution.s[j] < fit_from - 1e-9) continue;
    double sq = 0.0;
    for (const auto* run : tail) {
      const auto& star = run->result.trace.points[j].star.values;
      const auto& mass = run->result.grid.mass;
      for (std::size_t q = 0; q < star.size(); ++q) sq += mass[q] * star[q] * star[q];
    }
    x.push_back(std::log(tail.front()->result.trace.points[j].t));
    y.push_back(0.5 * std::log(sq));
  }
  if (x.size() < 2) throw Error(ErrorKind::NeedMoreCheckpoints, "remainder fit needs two times");
  rep.fitted_exponent = -num::fit_line(x, y).slope;
  return rep;
}

double mass_M(const ModeExpansion& expansion, const HarmonicSetup& radial) {
  const auto it = std::find_if(expansion.entries.begin(), expansion.entries.end(),
                               [](const ModeEntry& e) { return e.k == 0; });
  if (it == expansion.entries.end()) return 0.0;
  const double q0 = angular_harmonic(expansion.N, 0, 1, {});
  InitialData average;
  const auto coefficient = it->coefficient;
  average.star = [&](double r) { return q0 * coefficient(r) / radial.profile.value(r); };
  return m_of_phi(average, radial).M;
}

ProfileCheck mode_profile_check(const ModeEvolution& evolution, const ModeExpansion& expansion,
                                double s, double y_lo, double y_hi) {
  const auto radial = std::find_if(evolution.modes.begin(), evolution.modes.end(),
                                   [](const ModeRun& m) { return m.k == 0; });
  if (radial == evolution.modes.end())
    throw Error(ErrorKind::OutOfRange, "profile check needs a radial mode");
  ProfileCheck rep;
  rep.s = s;
  rep.A = radial->setup.exps.A;
  rep.M = mass_M(expansion, radial->setup);
  const std::size_t idx = evolution.checkpoint(s);
  const double t = radial->result.trace.points[idx].t;
  const double scale = std::pow(t, 0.5 * (evolution.N + rep.A));
  const auto quad = SphereQuadrature::make(evolution.N, evolution.N == 2 ? 16 : 8);
  double peak = 0.0;
  const int samples = 80;
  for (int j = 0; j <= samples; ++j) {
    const double y = y_lo + (y_hi - y_lo) * j / samples;
    const double limit = rep.M * std::pow(y, rep.A) * std::exp(-0.25 * y * y);
    peak = std::max(peak, std::abs(limit));
    for (const auto& dir : quad.nodes) {
      const double value = scale * evolution.assemble(idx, std::sqrt(t) * y, dir);
      rep.sup_error = std::max(rep.sup_error, std::abs(value - limit));
    }
  }
  // The continuous peak of |y|^A e^{-|y|^2/4} sits at |y| = sqrt(2A).
  if (rep.A > 0.0 && std::sqrt(2.0 * rep.A) <= y_hi)
    peak = std::max(peak, std::abs(rep.M) * std::pow(2.0 * rep.A, 0.5 * rep.A) * std::exp(-0.5 * rep.A));
  rep.relative_error = peak > 0.0 ? rep.sup_error / peak : rep.sup_error;
  return rep;
}

AngularData mixed_dipole_data() {
  return [](double r, const Direction& dir) {
    return std::exp(-0.25 * r * r) * (1.0 + 0.5 * r * std::cos(dir.theta));
  };
}

double mixed_dipole_exact(double r, double theta, double t) {
  const double g = std::exp(-0.25 * r * r / (1.0 + t));
  return g / (1.0 + t) + 0.5 * r * std::cos(theta) * g / ((1.0 + t) * (1.0 + t));
}

CommutationReport commutation_check(const ModeEvolution& evolution, const ModeExpansion& expansion,
                                    double s, double r_hi) {
  CommutationReport rep;
  rep.s = s;
  const std::size_t idx = evolution.checkpoint(s);
  const double t = std::expm1(evolution.s[idx]);
  const auto evolved = decompose(
      [t](double r, const Direction& dir) { return mixed_dipole_exact(r, dir.theta, t); },
      expansion.N, expansion.truncation, {0.0});
  for (const auto& run : evolution.modes) {
    const auto match = std::find_if(evolved.entries.begin(), evolved.entries.end(),
                                    [&](const ModeEntry& e) { return e.k == run.k && e.i == run.i; });
    const auto& grid = run.result.grid;
    const auto& star = run.result.trace.points[idx].star.values;
    for (std::size_t j = 0; j < grid.size() && grid.r[j] <= r_hi; ++j) {
      const double exact = match == evolved.entries.end() ? 0.0 : match->coefficient(grid.r[j]);
      rep.scale = std::max(rep.scale, std::abs(exact));
      rep.max_difference = std::max(rep.max_difference, std::abs(grid.U[j] * star[j] - exact));
    }
  }
  rep.relative = rep.scale > 0.0 ? rep.max_difference / rep.scale : rep.max_difference;
  return rep;
}

}  // namespace heatlab
