#include "heatlab/lab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "heatlab/diagnostics.hpp"
#include "heatlab/error.hpp"
#include "heatlab/evolve.hpp"
#include "heatlab/harmonic.hpp"
#include "heatlab/modes.hpp"
#include "heatlab/spectral.hpp"
#include "heatlab/svg.hpp"

namespace heatlab {

namespace {

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), name + " stage: " + e.detail());
  }
}

AsymptoticsReport base_report(const ExperimentConfig& config, const std::string& verb) {
  AsymptoticsReport rep;
  rep.experiment = config.name + "/" + verb;
  rep.config_hash = fnv1a_hex(config.canonical());
  rep.grid = {{"r_min", config.grid.r_min}, {"r_max", config.grid.r_max},
              {"n_points", double(config.grid.n_points)}, {"xi_max", config.grid.xi_max},
              {"cells", double(config.grid.cells)}, {"ds", config.grid.ds},
              {"h", config.grid.h}, {"s_end", config.run.s_end}};
  return rep;
}

void finish(AsymptoticsReport& rep, const OutputSink& sink) {
  for (auto& w : take_warnings()) rep.warnings.push_back(std::move(w));
  if (sink.wants("json")) sink.write("report.json", rep.dump());
}

HarmonicSetup setup_for(const ExperimentConfig& config) {
  return stage("harmonic", [&] {
    return prepare(config.potential_spec(), config.grid.r_max, config.grid.n_points,
                   config.grid.r_min);
  });
}

void describe_setup(AsymptoticsReport& rep, const HarmonicSetup& setup) {
  rep.classification = to_string(setup.exps.classification);
  rep.c_star = setup.profile.c_star;
  rep.rates["A"] = setup.exps.A;
  rep.rates["d"] = setup.exps.d;
}

std::string key_value_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = "quantity,value\n";
  for (const auto& [k, v] : rows) out += k + "," + format_number(v) + "\n";
  return out;
}

}  // namespace

bool OutputSink::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void OutputSink::write(const std::string& file, const std::string& content) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream out(dir / file, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write '" + (dir / file).string() + "'");
  out << content;
}

OutputSink OutputSink::for_experiment(const ExperimentConfig& config,
                                      const std::optional<std::string>& out_dir,
                                      const std::vector<std::string>& formats) {
  OutputSink sink;
  sink.dir = std::filesystem::path(out_dir.value_or(config.output.dir)) / config.name;
  sink.formats = formats.empty() ? config.output.formats : formats;
  return sink;
}

std::optional<Verb> parse_verb(const std::string& name) {
  for (Verb v : {Verb::Exponents, Verb::Harmonic, Verb::Spectrum, Verb::Evolve, Verb::Modes,
                 Verb::Kernel})
    if (to_string(v) == name) return v;
  return std::nullopt;
}

std::string to_string(Verb verb) {
  switch (verb) {
    case Verb::Exponents: return "exponents";
    case Verb::Harmonic: return "harmonic";
    case Verb::Spectrum: return "spectrum";
    case Verb::Evolve: return "evolve";
    case Verb::Modes: return "modes";
    case Verb::Kernel: return "kernel";
  }
  return "unknown";
}

AsymptoticsReport run_exponents(const ExperimentConfig& config, const OutputSink& sink) {
  config.validate();
  auto rep = base_report(config, "exponents");
  const auto spec = config.potential_spec();
  const auto setup = setup_for(config);
  describe_setup(rep, setup);
  const auto& e = setup.exps;
  const auto cond = stage("exponents", [&] {
    return validate_condition_V(spec, log_grid(config.grid.r_min, config.grid.r_max, 16));
  });
  rep.rates["A_plus_lambda1"] = e.A_plus_l1;
  rep.rates["A_plus_lambda2"] = e.A_plus_l2;
  rep.rates["A_minus_lambda2"] = e.A_minus_l2;
  rep.rates["Q"] = e.Q;
  const auto norm = normalization_constants(e.N, e.A);
  rep.rates["c_d"] = norm.c_d;
  rep.rates["kappa"] = norm.kappa;
  rep.checks.push_back(CheckRecord::compare("condition V holds", cond.violated ? 1.0 : 0.0, 0.0,
                                            0.5, Provenance::ClosedForm, cond.message));
  rep.checks.push_back(CheckRecord::compare(
      "indicial root identity A^2 + (N-2)A - lambda2",
      e.A * e.A + (e.N - 2.0) * e.A - e.lambda2, 0.0, 1e-12 * std::max(1.0, std::abs(e.lambda2)),
      Provenance::ClosedForm));
  if (sink.wants("csv"))
    sink.write("exponents.csv",
               key_value_csv({{"N", double(e.N)},
                              {"lambda1", e.lambda1},
                              {"lambda2", e.lambda2},
                              {"A_plus_lambda1", e.A_plus_l1},
                              {"A_plus_lambda2", e.A_plus_l2},
                              {"A_minus_lambda2", e.A_minus_l2},
                              {"A", e.A},
                              {"d", e.d},
                              {"Q", e.Q},
                              {"c_d", norm.c_d},
                              {"kappa", norm.kappa},
                              {"c_star", setup.profile.c_star}}));
  finish(rep, sink);
  return rep;
}

AsymptoticsReport run_harmonic(const ExperimentConfig& config, const OutputSink& sink) {
  config.validate();
  auto rep = base_report(config, "harmonic");
  const auto setup = setup_for(config);
  describe_setup(rep, setup);
  const auto& prof = setup.profile;
  rep.rates["delta_fit"] = prof.delta_fit;
  rep.rates["tail_residual"] = setup.fit.residual;
  rep.rates["tail_rival_residual"] = setup.fit.rival_residual;
  rep.rates["tail_offset"] = prof.tail_offset;
  rep.checks.push_back(CheckRecord::compare("U positive on the profile grid",
                                            *std::min_element(prof.U.begin(), prof.U.end()) > 0.0,
                                            1.0, 0.0, Provenance::ClosedForm));
  if (sink.wants("csv")) sink.write("profile.csv", profile_csv(prof));
  if (sink.wants("svg")) {
    svg::Series u{"U(r)", prof.r, prof.U};
    std::vector<double> ref(prof.r.size());
    for (std::size_t i = 0; i < ref.size(); ++i)
      ref[i] = prof.c_star * comparison_function(prof.tail, prof.N(), setup.exps.lambda2, prof.r[i]);
    svg::Series tail{"c* v(r)", prof.r, ref, true};
    sink.write("profile.svg", svg::line_plot({u, tail}, {"regular solution", "r", "U", true, true}));
  }
  finish(rep, sink);
  return rep;
}

AsymptoticsReport run_spectrum(const ExperimentConfig& config, const OutputSink& sink) {
  config.validate();
  auto rep = base_report(config, "spectrum");
  const auto setup = setup_for(config);
  describe_setup(rep, setup);
  const double d = setup.exps.d;
  SpectralGrid grid;
  grid.xi_max = config.grid.xi_max;
  grid.cells = config.grid.cells;
  const auto eig = stage("spectrum", [&] {
    return eigensolve(assemble(d, BoundaryKind::NaturalH1, grid), 4);
  });
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    rep.checks.push_back(CheckRecord::compare("mu_" + std::to_string(i), eig.eigenvalues[i],
                                              double(i), config.checks.eigen_tol,
                                              Provenance::ClosedForm));
    rep.rates["residual_" + std::to_string(i)] = eig.residuals[i];
  }
  const auto herm = hermite_check(eig);
  rep.checks.push_back(CheckRecord::compare("psi_0 against c_d exp(-xi^2/4)",
                                            herm.psi0_sup_deviation, 0.0, 1e-4,
                                            Provenance::ClosedForm));
  if (d < 2.0) {
    const auto dir = stage("spectrum", [&] {
      return eigensolve(assemble(d, BoundaryKind::DirichletH10, grid), 1);
    });
    // With A+ - A- = 2 - d for the pair whose smaller root gives d.
    rep.checks.push_back(CheckRecord::compare("Dirichlet mu_0", dir.eigenvalues[0], 1.0 - 0.5 * d,
                                              1e-3, Provenance::ClosedForm));
  }
  if (sink.wants("csv")) sink.write("spectrum.csv", decomposition_csv(eig));
  if (sink.wants("svg")) {
    std::vector<svg::Series> series;
    for (std::size_t k = 0; k < eig.vectors.size(); ++k)
      series.push_back({"psi_" + std::to_string(k), eig.xi, eig.vectors[k]});
    sink.write("spectrum.svg", svg::line_plot(series, {"eigenfunctions", "xi", "psi"}));
  }
  finish(rep, sink);
  return rep;
}

namespace {

InitialData make_data(const ExperimentConfig& config, const HarmonicSetup& setup, double r_max) {
  const auto& kind = config.run.data;
  if (kind == "bump") return InitialData::bump();
  if (kind == "self_similar") return InitialData::self_similar();
  if (kind == "zero_mass")
    return InitialData::zero_mass(EvolutionGrid::build(setup.profile, r_max, config.grid.h));
  if (kind == "ring") return InitialData::ring(setup.profile, config.run.ring_y, config.run.ring_tau);
  throw Error(ErrorKind::ConfigError, "run.data = " + kind + " is not radial; use the modes verb");
}

std::string trace_csv(const DiagnosticsTrace& trace) {
  std::vector<std::vector<double>> cols(7);
  for (const auto& c : trace.points) {
    for (auto [k, v] : {std::pair{0, c.s}, {1, c.t}, {2, c.a}, {3, c.w_norm}, {4, c.center},
                        {5, c.center_dt}, {6, c.mass}})
      cols[k].push_back(v);
  }
  return csv_table({"s", "t", "a", "w_norm", "center", "center_dt", "mass"}, cols);
}

void limit_checks(AsymptoticsReport& rep, const ExperimentConfig& config, const LimitReport& L,
                  const DiagnosticsTrace& trace) {
  const auto& k = config.checks;
  if (L.rate_mode) {
    rep.checks.push_back(CheckRecord::compare("decay rate of ||w|| for zero mass", L.decay_rate, 1.0,
                                              k.rate_tol, Provenance::ClosedForm,
                                              "first nonzero eigenvalue mu_1 = 1"));
    return;
  }
  rep.rates["a_end"] = L.a_end;
  rep.rates["norm_growth_constant"] = L.norm_growth_constant;
  rep.rates["norm_bounded"] = L.norm_bounded;
  if (L.classification == Classification::Sstar) {
    rep.checks.push_back(CheckRecord::compare("extrapolated s w against 2 m psi_2",
                                              L.profile_relative_error, 0.0, k.sstar_tol,
                                              Provenance::TheoremConstant));
    rep.checks.push_back(CheckRecord::compare("extrapolated t (log t)^2 u*(0,t) ratio",
                                              L.center_ratio, 1.0, k.sstar_tol,
                                              Provenance::TheoremConstant));
    rep.rates["sstar_center_dt_ratio"] = L.center_dt_ratio;
    return;
  }
  rep.checks.push_back(CheckRecord::compare("w(s_end) against m psi_d", L.profile_relative_error,
                                            0.0, k.profile_tol, Provenance::TheoremConstant,
                                            "sup over the xi window, relative to |m| c_d"));
  if (L.classification == Classification::C) {
    // a(s) approaches m slowly in case C; its settling over the last unit of s is checked.
    const double drift = std::abs(L.a_end - trace.at(L.s_end - 1.0, 2e-3).a) / std::abs(L.m);
    rep.rates["a_error"] = L.a_error;
    rep.checks.push_back(CheckRecord::compare("|a(s_end) - a(s_end - 1)| / |m|", drift, 0.0, 0.01,
                                              Provenance::Oracle));
  } else {
    rep.checks.push_back(CheckRecord::compare("a(s_end) against quadrature m", L.a_error, 0.0,
                                              k.a_tol * std::max(1.0, std::abs(L.m)),
                                              Provenance::Oracle));
  }
  rep.checks.push_back(CheckRecord::compare("t^{d/2} u*(0,t) c*/(c_d m)", L.center_ratio, 1.0,
                                            k.center_tol, Provenance::TheoremConstant));
  rep.checks.push_back(CheckRecord::compare("t^{d/2+1} du*/dt(0,t) 2c*/(-d c_d m)",
                                            L.center_dt_ratio, 1.0, k.center_dt_tol,
                                            Provenance::TheoremConstant));
}

void evolve_plots(const OutputSink& sink, const DiagnosticsTrace& trace, const HarmonicSetup& setup,
                  double m) {
  const bool log_case = setup.exps.classification == Classification::Sstar;
  const double d = log_case ? 2.0 : setup.exps.d;
  const double cd = hermite_normalization(d);
  const auto& last = trace.points.back();
  const auto& xi = last.w.r;
  std::vector<svg::Series> series;
  for (double s : {0.25 * last.s, 0.5 * last.s, 0.75 * last.s, last.s}) {
    const Checkpoint* c = nullptr;
    for (const auto& p : trace.points)
      if (!c || std::abs(p.s - s) < std::abs(c->s - s)) c = &p;
    std::vector<double> y = c->w.values;
    if (log_case)
      for (double& v : y) v *= c->s;
    char label[32];
    std::snprintf(label, sizeof label, "s = %.2f", c->s);
    series.push_back({label, xi, y});
  }
  std::vector<double> limit(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i)
    limit[i] = (log_case ? 2.0 : 1.0) * m * cd * std::exp(-0.25 * xi[i] * xi[i]);
  series.push_back({log_case ? "2 m psi_2" : "m psi_d", xi, limit, true});
  sink.write("selfsim.svg", svg::line_plot(series, {"self-similar profile", "xi",
                                                    log_case ? "s w" : "w"}));
  std::vector<double> s, a, mline, norm;
  for (const auto& c : trace.points) {
    s.push_back(c.s);
    a.push_back(c.a);
    mline.push_back(m);
    norm.push_back(c.w_norm);
  }
  sink.write("a_trace.svg",
             svg::line_plot({{"a(s)", s, a}, {"m(phi)", s, mline, true}}, {"projection a(s)", "s", "a"}));
  sink.write("norm.svg", svg::line_plot({{"||w||", s, norm}},
                                        {"weighted norm", "s", "||w||", false, true}));
}

}  // namespace

AsymptoticsReport run_experiment(const ExperimentConfig& config, const OutputSink& sink) {
  config.validate();
  auto rep = base_report(config, "evolve");
  const auto setup = setup_for(config);
  describe_setup(rep, setup);
  if (sink.wants("csv")) sink.write("profile.csv", profile_csv(setup.profile));

  SpectralGrid sg;
  sg.xi_max = config.grid.xi_max;
  sg.cells = config.grid.cells;
  const auto frame = stage("spectrum", [&] { return SelfSimilarFrame::make(setup.exps.d, 3, sg); });

  Schedule sched;
  sched.ds = config.grid.ds;
  sched.s_end = config.run.s_end;
  sched.checkpoint_every = config.run.checkpoint_every;
  sched.extra_checkpoints = config.run.checkpoints;
  if (config.check_enabled("gd"))
    for (double t : config.checks.gd_times) sched.extra_checkpoints.push_back(std::log1p(t));
  RunOptions opts;
  opts.h = config.grid.h;
  opts.r_max = 1.02 * frame.xi_max() * std::exp(0.5 * sched.s_end) + 1.0;
  const auto data = stage("evolve", [&] { return make_data(config, setup, opts.r_max); });
  const auto res = stage("evolve", [&] { return run(setup, data, sched, frame, opts); });
  const auto& trace = res.trace;
  const auto mf = m_of_phi(data, setup, &res.grid);
  rep.m = config.run.data == "zero_mass" ? mf.m_discrete : mf.m;
  rep.M = mf.M;
  rep.rates["m_discrete"] = mf.m_discrete;
  rep.rates["min_relative_value"] = trace.min_relative_value;
  rep.grid["evolution_cells"] = double(res.grid.size());
  rep.grid["evolution_r_max"] = res.grid.r_max();
  if (sink.wants("csv")) {
    sink.write("trace.csv", trace_csv(trace));
    sink.write("field_final.csv", field_csv(trace.points.back().star));
    sink.write("selfsim_final.csv", field_csv(trace.points.back().w));
  }

  stage("checks", [&] {
    const auto& k = config.checks;
    if (config.check_enabled("conservation"))
      rep.checks.push_back(CheckRecord::compare("relative drift of the weighted mass",
                                                trace.max_mass_drift, 0.0, k.conservation_tol,
                                                Provenance::ClosedForm));
    if (config.check_enabled("exact")) {
      const auto kind = setup.profile.potential().kind();
      if (config.run.data != "self_similar" ||
          (kind != PotentialKind::Hardy && kind != PotentialKind::Free))
        throw Error(ErrorKind::ConfigError,
                    "the exact check needs self-similar data on a pure power potential");
      const double s_check = std::min(4.0, sched.s_end);
      const auto& c = trace.at(s_check, 0.5 * sched.ds);
      rep.checks.push_back(CheckRecord::compare(
          "self-similar data against the closed form", selfsimilar_exact_error(c, res.grid, setup.exps.d),
          0.0, k.exact_tol, Provenance::ClosedForm));
    }
    if (config.check_enabled("limits")) {
      LimitOptions lo;
      lo.xi_lo = k.xi_lo;
      lo.xi_hi = k.xi_hi;
      limit_checks(rep, config, theorem_limits(trace, setup, rep.m, lo), trace);
    }
    if (config.check_enabled("envelope")) {
      const double d = setup.exps.d;
      const auto E = supersolution_envelope(trace, res.grid, setup, 0.25 * d, 0.0);
      rep.rates["envelope_constant"] = E.constant;
      rep.rates["envelope_fitted_exponent"] = E.fitted_exponent;
      rep.rates["discrete_F_deviation"] = E.discrete_F_deviation;
      if (setup.exps.classification != Classification::Sstar)
        rep.checks.push_back(CheckRecord::compare("envelope exponent over D + d/4",
                                                  -E.fitted_exponent / E.gamma, 1.0,
                                                  k.envelope_tol, Provenance::TheoremConstant));
      rep.checks.push_back(CheckRecord::compare("supersolution residual of W*",
                                                std::min(E.min_residual, 0.0), 0.0, 1e-6,
                                                Provenance::ClosedForm));
      rep.checks.push_back(CheckRecord::compare(
          "zeta <= W* <= 2 zeta on r <= eps sqrt(t)",
          std::max({0.0, 1.0 - E.min_ratio, E.max_ratio - 2.0}), 0.0, 1e-12,
          Provenance::ClosedForm));
    }
    if (config.check_enabled("gd")) {
      const auto G = g_d_check(trace, res.grid, setup, k.gd_times);
      rep.rates["gd_rms"] = G.rms;
      rep.rates["gd_beta_first_difference"] = G.beta_d1;
      rep.rates["gd_beta_second_difference"] = G.beta_d2;
      rep.checks.push_back(CheckRecord::compare("G_d exponent in r", G.beta, G.beta_expected,
                                                k.gd_beta_tol, Provenance::TheoremConstant));
      rep.checks.push_back(CheckRecord::compare("G_d exponent in t", G.alpha, G.alpha_expected,
                                                k.gd_alpha_tol, Provenance::TheoremConstant));
    }
    return 0;
  });
  if (sink.wants("svg")) evolve_plots(sink, trace, setup, rep.m);
  finish(rep, sink);
  return rep;
}

AsymptoticsReport run_modes(const ExperimentConfig& config, const OutputSink& sink) {
  config.validate();
  if (config.potential.N != 2 && config.potential.N != 3)
    throw Error(ErrorKind::ConfigError, "the modes verb supports potential.N = 2 or 3");
  auto rep = base_report(config, "modes");
  const auto spec = config.potential_spec();
  const auto ex = stage("modes", [&] {
    return decompose(mixed_dipole_data(), config.potential.N, config.run.modes);
  });
  rep.rates["parseval_defect"] = ex.parseval_defect();
  rep.rates["top_fraction"] = ex.top_fraction;
  rep.checks.push_back(CheckRecord::compare("discrete Parseval defect", ex.parseval_defect(), 0.0,
                                            1e-10, Provenance::ClosedForm));
  if (sink.wants("csv")) sink.write("expansion.csv", ex.csv());

  Schedule sched;
  sched.ds = config.grid.ds;
  sched.s_end = config.run.s_end;
  sched.checkpoint_every = config.run.checkpoint_every;
  sched.extra_checkpoints = config.run.checkpoints;
  ModeRunOptions mo;
  mo.run.h = config.grid.h;
  const auto ev = stage("modes", [&] { return evolve_modes(ex, spec, sched, mo); });

  const ModeRun* radial = nullptr;
  const ModeRun* dipole = nullptr;
  for (const auto& m : ev.modes) {
    if (m.k == 0 && !radial) radial = &m;
    if (m.k == 1 && !dipole) dipole = &m;
    rep.rates["decay_k" + std::to_string(m.k) + "_i" + std::to_string(m.i)] = m.decay_exponent;
  }
  stage("checks", [&] {
    if (radial) {
      describe_setup(rep, radial->setup);
      const auto pc = mode_profile_check(ev, ex, sched.s_end);
      rep.M = pc.M;
      rep.checks.push_back(CheckRecord::compare("t^{(N+A)/2} u(sqrt(t) y) against M |y|^A e^{-|y|^2/4}",
                                                pc.relative_error, 0.0,
                                                config.checks.mode_profile_tol,
                                                Provenance::TheoremConstant));
    }
    if (radial && dipole) {
      const double expected = dipole->expected_decay - radial->expected_decay;
      const double measured = dipole->decay_exponent - radial->decay_exponent;
      rep.rates["extra_decay_k1"] = measured;
      rep.checks.push_back(CheckRecord::compare("k = 1 extra decay over A+(lambda2 + omega_1) - A",
                                                measured / expected, 1.0,
                                                config.checks.mode_exponent_tol,
                                                Provenance::ClosedForm));
    }
    const auto rb = remainder_bound(ev, spec, 1);
    if (!rb.vanishes) {
      rep.rates["remainder_exponent"] = rb.fitted_exponent;
      rep.checks.push_back(CheckRecord::compare("remainder decay over d_1/4",
                                                rb.fitted_exponent / rb.expected_exponent, 1.0,
                                                config.checks.remainder_tol, Provenance::ClosedForm));
    }
    return 0;
  });

  std::vector<std::string> header = {"s"};
  std::vector<std::vector<double>> cols = {ev.s};
  std::vector<svg::Series> series;
  for (const auto& m : ev.modes) {
    std::vector<double> sup, t;
    for (std::size_t j = 0; j < ev.s.size(); ++j) {
      const auto& star = m.result.trace.points[j].star.values;
      double v = 0.0;
      for (std::size_t q = 0; q < star.size(); ++q)
        v = std::max(v, std::abs(m.result.grid.U[q] * star[q]));
      sup.push_back(v);
      t.push_back(m.result.trace.points[j].t);
    }
    const std::string name = "sup_k" + std::to_string(m.k) + "_i" + std::to_string(m.i);
    header.push_back(name);
    cols.push_back(sup);
    series.push_back({name, t, sup});
  }
  if (sink.wants("csv")) sink.write("modes.csv", csv_table(header, cols));
  if (sink.wants("svg"))
    sink.write("modes.svg",
               svg::line_plot(series, {"per-mode decay", "t", "sup |u_k|", true, true}));
  finish(rep, sink);
  return rep;
}

AsymptoticsReport run_kernel(const ExperimentConfig& config, const OutputSink& sink) {
  config.validate();
  auto rep = base_report(config, "kernel");
  const auto setup = setup_for(config);
  describe_setup(rep, setup);
  SpectralGrid sg;
  sg.xi_max = config.grid.xi_max;
  sg.cells = config.grid.cells;
  const auto frame = stage("spectrum", [&] { return SelfSimilarFrame::make(setup.exps.d, 3, sg); });
  const auto K = stage("kernel", [&] {
    return kernel_probe(setup, frame, config.run.ring_y, config.run.ring_tau, config.run.kernel_x,
                        config.run.s_end, config.grid.ds);
  });
  rep.rates["kernel_constant_expected"] = K.expected;
  rep.checks.push_back(CheckRecord::compare("width-extrapolated kernel constant",
                                            K.max_relative_error, 0.0, config.checks.kernel_tol,
                                            Provenance::TheoremConstant,
                                            "max relative error over the probe points"));
  if (K.oracle_relative_error >= 0.0)
    rep.checks.push_back(CheckRecord::compare("Bessel kernel oracle at s = 1",
                                              K.oracle_relative_error, 0.0,
                                              config.checks.kernel_tol, Provenance::Oracle));
  if (sink.wants("csv")) {
    std::vector<double> expected(K.x.size(), K.expected);
    sink.write("kernel.csv", csv_table({"x", "estimate_tau", "estimate_tau_half", "extrapolated",
                                        "expected"},
                                       {K.x, K.estimates[0], K.estimates[1], K.extrapolated, expected}));
  }
  if (sink.wants("svg")) {
    std::vector<double> expected(K.x.size(), K.expected);
    sink.write("kernel.svg",
               svg::line_plot({{"tau", K.x, K.estimates[0]},
                               {"tau/2", K.x, K.estimates[1]},
                               {"extrapolated", K.x, K.extrapolated},
                               {"expected", K.x, expected, true}},
                              {"kernel constant", "x", "t^{d/2} p / (U U)"}));
  }
  finish(rep, sink);
  return rep;
}

AsymptoticsReport run_verb(Verb verb, const ExperimentConfig& config, const OutputSink& sink) {
  switch (verb) {
    case Verb::Exponents: return run_exponents(config, sink);
    case Verb::Harmonic: return run_harmonic(config, sink);
    case Verb::Spectrum: return run_spectrum(config, sink);
    case Verb::Evolve: return run_experiment(config, sink);
    case Verb::Modes: return run_modes(config, sink);
    case Verb::Kernel: return run_kernel(config, sink);
  }
  throw Error(ErrorKind::ConfigError, "unknown verb");
}

}  // namespace heatlab
