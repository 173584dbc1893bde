#pragma once

#include <map>
#include <string>
#include <vector>

#include "heatlab/exponents.hpp"

namespace heatlab {

struct PotentialBlock {
  std::string kind = "hardy";  // free | hardy | interpolated | compact_bump | designer
  int N = 3;
  double lambda = 2.0;  // hardy
  double lambda1 = 0.0, lambda2 = 2.0, theta = 2.0, r0 = 1.0;  // interpolated
  double amplitude = 1.0, radius = 1.0;                         // compact_bump
  double seed_a0 = 0.0, seed_ainf = -1.0;                       // designer
};

struct GridBlock {
  double r_min = 1e-6;  // harmonic profile grid
  double r_max = 1e4;
  int n_points = 4096;
  double xi_max = 12.0;  // self-similar frame
  int cells = 4000;
  double ds = 1e-3;  // evolution
  double h = 0.0035;
};

struct RunBlock {
  double s_end = 8.0;
  double checkpoint_every = 0.25;
  std::vector<double> checkpoints;  // extra checkpoints, in s
  std::string data = "bump";        // bump | self_similar | zero_mass | ring | mixed_dipole
  double ring_y = 1.0;
  double ring_tau = 0.04;
  int modes = 4;
  std::vector<double> kernel_x = {0.0, 0.5, 1.0, 2.0};
};

struct ChecksBlock {
  std::vector<std::string> enabled = {"conservation", "limits", "envelope"};
  double conservation_tol = 1e-10;
  double exact_tol = 1e-4;       // self-similar data against the closed form
  double profile_tol = 0.02;     // relative to |m| c_d
  double center_tol = 0.02;
  double center_dt_tol = 0.05;
  double a_tol = 1e-3;
  double rate_tol = 0.05;
  double gd_beta_tol = 0.2;
  double gd_alpha_tol = 0.3;
  std::vector<double> gd_times = {200.0, 400.0, 800.0, 1600.0};
  double envelope_tol = 0.05;
  double sstar_tol = 0.1;
  double kernel_tol = 0.02;
  double mode_profile_tol = 0.03;
  double mode_exponent_tol = 0.05;
  double remainder_tol = 0.1;
  double eigen_tol = 1e-4;
  double xi_lo = 0.2;
  double xi_hi = 5.0;
};

struct OutputBlock {
  std::string dir = "out";
  std::vector<std::string> formats = {"csv", "json", "svg"};
};

struct ExperimentConfig {
  std::string name = "experiment";
  PotentialBlock potential;
  GridBlock grid;
  RunBlock run;
  ChecksBlock checks;
  OutputBlock output;
  std::map<std::string, std::string> entries;  // keys as given, for the report hash

  bool check_enabled(const std::string& name) const;
  PotentialSpec potential_spec() const;
  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
  /// Sorted `key=value` lines of the given entries.
  std::string canonical() const;
};

/// Parses `section.key = value` lines; `#` starts a comment. Unknown or
/// repeated keys and malformed values are ConfigErrors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace heatlab
