#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "heatlab/config.hpp"
#include "heatlab/report.hpp"

namespace heatlab {

/// Destination of one experiment's artifacts: `<out>/<experiment name>/`.
struct OutputSink {
  std::filesystem::path dir;
  std::vector<std::string> formats;

  bool wants(const std::string& format) const;
  /// Writes `content` to dir/file, creating the directory on first use.
  void write(const std::string& file, const std::string& content) const;

  static OutputSink for_experiment(const ExperimentConfig& config,
                                   const std::optional<std::string>& out_dir = std::nullopt,
                                   const std::vector<std::string>& formats = {});
};

enum class Verb { Exponents, Harmonic, Spectrum, Evolve, Modes, Kernel };

std::optional<Verb> parse_verb(const std::string& name);
std::string to_string(Verb verb);

/// Exponents, classification and the condition (V) diagnostics.
AsymptoticsReport run_exponents(const ExperimentConfig& config, const OutputSink& sink);
/// Regular solution U, its tail fit and the profile CSV.
AsymptoticsReport run_harmonic(const ExperimentConfig& config, const OutputSink& sink);
/// Lowest eigenpairs of the weighted operator in the run's dimension d.
AsymptoticsReport run_spectrum(const ExperimentConfig& config, const OutputSink& sink);
/// Full radial experiment: evolution, limit constants and the enabled checks.
AsymptoticsReport run_experiment(const ExperimentConfig& config, const OutputSink& sink);
/// Angular decomposition of the mixed radial plus cos(theta) data and per-mode runs.
AsymptoticsReport run_modes(const ExperimentConfig& config, const OutputSink& sink);
/// Kernel constant from ring data of shrinking width.
AsymptoticsReport run_kernel(const ExperimentConfig& config, const OutputSink& sink);

AsymptoticsReport run_verb(Verb verb, const ExperimentConfig& config, const OutputSink& sink);

}  // namespace heatlab
