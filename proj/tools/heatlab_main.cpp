#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "heatlab/acceptance.hpp"
#include "heatlab/config.hpp"
#include "heatlab/error.hpp"
#include "heatlab/lab.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;
constexpr int kAcceptanceFailure = 4;

struct GlobalFlags {
  std::string config;
  std::string out;
  std::vector<std::string> formats;
  std::vector<std::string> only;
  double eigen_tol = 1e-4;
};

int run_lab_verb(heatlab::Verb verb, const GlobalFlags& flags) {
  if (flags.config.empty()) {
    std::cerr << "error: --config is required for " << heatlab::to_string(verb) << '\n';
    return kConfigError;
  }
  auto config = heatlab::load_config(flags.config);
  std::optional<std::string> out;
  if (!flags.out.empty()) out = flags.out;
  const auto sink = heatlab::OutputSink::for_experiment(config, out, flags.formats);
  const auto report = heatlab::run_verb(verb, config, sink);
  for (const auto& c : report.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " measured " << c.measured
              << " expected " << c.expected << " tol " << c.tolerance << '\n';
  std::cout << "artifacts in " << sink.dir.string() << '\n';
  return report.all_pass() ? kOk : kAcceptanceFailure;
}

int run_verify(const GlobalFlags& flags) {
  heatlab::AcceptanceOptions options;
  options.only = flags.only;
  options.eigen_tol = flags.eigen_tol;
  const auto summary = heatlab::acceptance_suite(options, &std::cout);
  if (summary.results.empty()) {
    std::cerr << "error: --only selected no criteria\n";
    return kConfigError;
  }
  if (!flags.out.empty()) {
    heatlab::OutputSink sink{flags.out, {"json"}};
    sink.write("verify.json", summary.to_json().dump(2) + "\n");
  }
  return summary.all_pass() ? kOk : kAcceptanceFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for heat flows with inverse-square radial potentials"};
  app.require_subcommand(1);
  GlobalFlags flags;
  const std::vector<std::string> verbs = {"exponents", "harmonic", "spectrum", "evolve",
                                          "modes", "kernel", "verify"};
  for (const auto& name : verbs) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config, "experiment config (flat key = value)");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--format", flags.formats, "artifact formats")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    sub->add_option("--only", flags.only, "criterion group or id (verify)");
    if (name == "verify")
      sub->add_option("--eigen-tol", flags.eigen_tol, "eigenvalue tolerance")
          ->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    if (verb == "verify") return run_verify(flags);
    return run_lab_verb(*heatlab::parse_verb(verb), flags);
  } catch (const heatlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == heatlab::ErrorKind::ConfigError ? kConfigError : kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}
