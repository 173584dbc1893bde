#include "heatlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "heatlab/error.hpp"

namespace heatlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorKind::ConfigError, message); }

double parse_double(const std::string& key, const std::string& value) {
  double x = 0.0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x))
    fail("'" + key + "': expected a number, got '" + value + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& value) {
  int x = 0;
  const char* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, x);
  if (ec != std::errc() || ptr != end) fail("'" + key + "': expected an integer, got '" + value + "'");
  return x;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_double(key, item));
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

template <class Block, class T>
Setter field(Block ExperimentConfig::*block, T Block::*member) {
  return [block, member](ExperimentConfig& c, const std::string& key, const std::string& value) {
    auto& target = c.*block.*member;
    if constexpr (std::is_same_v<T, double>) target = parse_double(key, value);
    else if constexpr (std::is_same_v<T, int>) target = parse_int(key, value);
    else if constexpr (std::is_same_v<T, std::string>) target = value;
    else if constexpr (std::is_same_v<T, std::vector<double>>) target = parse_doubles(key, value);
    else target = split_list(value);
  };
}

const std::map<std::string, Setter>& setters() {
  using C = ExperimentConfig;
  static const std::map<std::string, Setter> table = {
      {"experiment.name", [](C& c, const std::string&, const std::string& v) { c.name = v; }},
      {"potential.kind", field(&C::potential, &PotentialBlock::kind)},
      {"potential.N", field(&C::potential, &PotentialBlock::N)},
      {"potential.lambda", field(&C::potential, &PotentialBlock::lambda)},
      {"potential.lambda1", field(&C::potential, &PotentialBlock::lambda1)},
      {"potential.lambda2", field(&C::potential, &PotentialBlock::lambda2)},
      {"potential.theta", field(&C::potential, &PotentialBlock::theta)},
      {"potential.r0", field(&C::potential, &PotentialBlock::r0)},
      {"potential.amplitude", field(&C::potential, &PotentialBlock::amplitude)},
      {"potential.radius", field(&C::potential, &PotentialBlock::radius)},
      {"potential.seed_a0", field(&C::potential, &PotentialBlock::seed_a0)},
      {"potential.seed_ainf", field(&C::potential, &PotentialBlock::seed_ainf)},
      {"grid.r_min", field(&C::grid, &GridBlock::r_min)},
      {"grid.r_max", field(&C::grid, &GridBlock::r_max)},
      {"grid.n_points", field(&C::grid, &GridBlock::n_points)},
      {"grid.xi_max", field(&C::grid, &GridBlock::xi_max)},
      {"grid.cells", field(&C::grid, &GridBlock::cells)},
      {"grid.ds", field(&C::grid, &GridBlock::ds)},
      {"grid.h", field(&C::grid, &GridBlock::h)},
      {"run.s_end", field(&C::run, &RunBlock::s_end)},
      {"run.checkpoint_every", field(&C::run, &RunBlock::checkpoint_every)},
      {"run.checkpoints", field(&C::run, &RunBlock::checkpoints)},
      {"run.data", field(&C::run, &RunBlock::data)},
      {"run.ring_y", field(&C::run, &RunBlock::ring_y)},
      {"run.ring_tau", field(&C::run, &RunBlock::ring_tau)},
      {"run.modes", field(&C::run, &RunBlock::modes)},
      {"run.kernel_x", field(&C::run, &RunBlock::kernel_x)},
      {"checks.enabled", field(&C::checks, &ChecksBlock::enabled)},
      {"checks.conservation_tol", field(&C::checks, &ChecksBlock::conservation_tol)},
      {"checks.exact_tol", field(&C::checks, &ChecksBlock::exact_tol)},
      {"checks.profile_tol", field(&C::checks, &ChecksBlock::profile_tol)},
      {"checks.center_tol", field(&C::checks, &ChecksBlock::center_tol)},
      {"checks.center_dt_tol", field(&C::checks, &ChecksBlock::center_dt_tol)},
      {"checks.a_tol", field(&C::checks, &ChecksBlock::a_tol)},
      {"checks.rate_tol", field(&C::checks, &ChecksBlock::rate_tol)},
      {"checks.gd_beta_tol", field(&C::checks, &ChecksBlock::gd_beta_tol)},
      {"checks.gd_alpha_tol", field(&C::checks, &ChecksBlock::gd_alpha_tol)},
      {"checks.gd_times", field(&C::checks, &ChecksBlock::gd_times)},
      {"checks.envelope_tol", field(&C::checks, &ChecksBlock::envelope_tol)},
      {"checks.sstar_tol", field(&C::checks, &ChecksBlock::sstar_tol)},
      {"checks.kernel_tol", field(&C::checks, &ChecksBlock::kernel_tol)},
      {"checks.mode_profile_tol", field(&C::checks, &ChecksBlock::mode_profile_tol)},
      {"checks.mode_exponent_tol", field(&C::checks, &ChecksBlock::mode_exponent_tol)},
      {"checks.remainder_tol", field(&C::checks, &ChecksBlock::remainder_tol)},
      {"checks.eigen_tol", field(&C::checks, &ChecksBlock::eigen_tol)},
      {"checks.xi_lo", field(&C::checks, &ChecksBlock::xi_lo)},
      {"checks.xi_hi", field(&C::checks, &ChecksBlock::xi_hi)},
      {"output.dir", field(&C::output, &OutputBlock::dir)},
      {"output.formats", field(&C::output, &OutputBlock::formats)},
  };
  return table;
}

}  // namespace

bool ExperimentConfig::check_enabled(const std::string& check) const {
  return std::find(checks.enabled.begin(), checks.enabled.end(), check) != checks.enabled.end();
}

PotentialSpec ExperimentConfig::potential_spec() const {
  const auto& p = potential;
  const auto checked = [](PotentialSpec spec) {
    critical_exponents(spec.N(), spec.lambda1());
    critical_exponents(spec.N(), spec.lambda2());
    return spec;
  };
  try {
    if (p.kind == "free") return checked(PotentialSpec::free(p.N));
    if (p.kind == "hardy") return checked(PotentialSpec::hardy(p.N, p.lambda));
    if (p.kind == "interpolated")
      return checked(PotentialSpec::interpolated(p.N, p.lambda1, p.lambda2, p.theta, p.r0));
    if (p.kind == "compact_bump")
      return checked(PotentialSpec::compact_bump(p.N, p.amplitude, p.radius));
    if (p.kind == "designer")
      return checked(
          designer_potential(HarmonicProfileSeed::power_transition(p.seed_a0, p.seed_ainf), p.N));
  } catch (const Error& e) {
    fail(std::string("potential: ") + e.what());
  }
  fail("potential.kind: unknown kind '" + p.kind + "'");
}

void ExperimentConfig::validate() const {
  if (potential.N < 1) fail("potential.N must be at least 1");
  (void)potential_spec();

  if (!(grid.r_min > 0.0)) fail("grid.r_min must be positive");
  if (!(grid.r_max > grid.r_min)) fail("grid.r_max must exceed grid.r_min");
  if (grid.n_points < 16) fail("grid.n_points must be at least 16");
  if (!(grid.xi_max > 0.0)) fail("grid.xi_max must be positive");
  if (grid.cells < 100) fail("grid.cells must be at least 100");
  if (!(grid.ds > 0.0)) fail("grid.ds must be positive");
  if (!(grid.h > 0.0) || grid.h > 0.1) fail("grid.h must lie in (0, 0.1]");

  if (!(run.s_end > 0.0)) fail("run.s_end must be positive");
  if (!(run.checkpoint_every > 0.0)) fail("run.checkpoint_every must be positive");
  for (double s : run.checkpoints)
    if (s < 0.0 || s > run.s_end) fail("run.checkpoints must lie in [0, run.s_end]");
  if (grid.xi_max * std::exp(0.5 * run.s_end) > grid.r_max)
    fail("grid.r_max must cover xi_max e^{s_end/2}");
  static const std::vector<std::string> kinds = {"bump", "self_similar", "zero_mass", "ring",
                                                 "mixed_dipole"};
  if (std::find(kinds.begin(), kinds.end(), run.data) == kinds.end())
    fail("run.data: unknown initial data '" + run.data + "'");
  if (!(run.ring_y > 0.0) || !(run.ring_tau > 0.0)) fail("run.ring_y and run.ring_tau must be positive");
  if (run.modes < 1) fail("run.modes must be positive");

  const auto& k = checks;
  for (double tol : {k.conservation_tol, k.exact_tol, k.profile_tol, k.center_tol, k.center_dt_tol, k.a_tol,
                     k.rate_tol, k.gd_beta_tol, k.gd_alpha_tol, k.envelope_tol, k.sstar_tol,
                     k.kernel_tol, k.mode_profile_tol, k.mode_exponent_tol, k.remainder_tol,
                     k.eigen_tol})
    if (!(tol > 0.0)) fail("all tolerances must be positive");
  if (!(k.xi_lo >= 0.0) || !(k.xi_hi > k.xi_lo) || k.xi_hi > grid.xi_max)
    fail("checks.xi_lo/xi_hi must satisfy 0 <= xi_lo < xi_hi <= grid.xi_max");
  if (check_enabled("gd"))
    for (double t : k.gd_times)
      if (!(t > 0.0) || std::log1p(t) > run.s_end)
        fail("checks.gd_times must lie in (0, e^{s_end} - 1]");
  static const std::vector<std::string> known = {"conservation", "limits", "envelope", "gd",
                                                 "kernel", "exact", "modes", "spectrum"};
  for (const auto& c : k.enabled)
    if (std::find(known.begin(), known.end(), c) == known.end())
      fail("checks.enabled: unknown check '" + c + "'");
  for (const auto& f : output.formats)
    if (f != "csv" && f != "json" && f != "svg") fail("output.formats: unknown format '" + f + "'");
}

std::string ExperimentConfig::canonical() const {
  std::string out;
  for (const auto& [key, value] : entries) out += key + "=" + value + "\n";
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) fail("line " + std::to_string(number) + ": unknown key '" + key + "'");
    if (config.entries.count(key)) fail("line " + std::to_string(number) + ": repeated key '" + key + "'");
    if (value.empty()) fail("line " + std::to_string(number) + ": empty value for '" + key + "'");
    it->second(config, key, value);
    config.entries[key] = value;
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace heatlab
