#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "heatlab/config.hpp"
#include "heatlab/error.hpp"
#include "heatlab/lab.hpp"
#include "heatlab/report.hpp"
#include "heatlab/svg.hpp"

using namespace heatlab;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::string& text, bool validate = false) {
  try {
    const auto c = parse_config(text);
    if (validate) c.validate();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised for: " << text);
  return ErrorKind::OutOfRange;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kHardy =
    "experiment.name = hardy_unit\n"
    "# inverse-square potential\n"
    "potential.kind = hardy\n"
    "potential.N = 3\n"
    "potential.lambda = 2\n"
    "run.checkpoints = 1.5, 2.5\n"
    "checks.enabled = conservation\n";

}  // namespace

TEST_CASE("config parsing fills the blocks") {
  const auto c = parse_config(kHardy);
  CHECK(c.name == "hardy_unit");
  CHECK(c.potential.N == 3);
  CHECK(c.potential.lambda == 2.0);
  REQUIRE(c.run.checkpoints.size() == 2);
  CHECK(c.run.checkpoints[1] == 2.5);
  CHECK(c.check_enabled("conservation"));
  CHECK_FALSE(c.check_enabled("gd"));
  CHECK(c.potential_spec().lambda2() == 2.0);
  c.validate();
  // Canonical text is sorted and independent of input order and comments.
  const auto shuffled = parse_config(
      "potential.lambda=2\nchecks.enabled = conservation\npotential.N=3\n"
      "run.checkpoints=1.5, 2.5\npotential.kind=hardy\nexperiment.name=hardy_unit\n");
  CHECK(shuffled.canonical() == c.canonical());
}

TEST_CASE("malformed configs are config errors") {
  CHECK(kind_of("potential.colour = red\n") == ErrorKind::ConfigError);
  CHECK(kind_of("potential.N = 3\npotential.N = 2\n") == ErrorKind::ConfigError);
  CHECK(kind_of("grid.h =\n") == ErrorKind::ConfigError);
  CHECK(kind_of("grid.h = 1.2.3\n") == ErrorKind::ConfigError);
  CHECK(kind_of("no equals sign\n") == ErrorKind::ConfigError);
  CHECK(kind_of("grid.n_points = -12\n", true) == ErrorKind::ConfigError);
  CHECK(kind_of("checks.enabled = conservation, telepathy\n", true) == ErrorKind::ConfigError);
  CHECK(kind_of("run.s_end = 30\n", true) == ErrorKind::ConfigError);
  CHECK(kind_of("output.formats = pdf\n", true) == ErrorKind::ConfigError);
  CHECK(kind_of("potential.kind = hardy\npotential.N = 3\npotential.lambda = -1\n", true) ==
        ErrorKind::ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/heatlab.cfg"), Error);
}

TEST_CASE("check records pass only on finite values within tolerance") {
  CHECK(CheckRecord::compare("a", 1.0 + 1e-9, 1.0, 1e-8, Provenance::ClosedForm).pass);
  CHECK_FALSE(CheckRecord::compare("b", 1.1, 1.0, 1e-8, Provenance::ClosedForm).pass);
  CHECK_FALSE(CheckRecord::compare("c", std::nan(""), 1.0, 1e9, Provenance::Oracle).pass);
}

TEST_CASE("report JSON is deterministic and encodes non-finite values as strings") {
  AsymptoticsReport r;
  r.experiment = "x/evolve";
  r.classification = "S";
  r.checks.push_back(CheckRecord::compare("z", 0.5, 0.5, 0.1, Provenance::TheoremConstant));
  r.rates["b"] = std::numeric_limits<double>::infinity();
  r.rates["a"] = 1.0;
  const auto j = r.to_json();
  CHECK(j["rates"]["b"] == "inf");
  CHECK(r.dump() == r.dump());
  CHECK(r.dump().back() == '\n');
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(csv_table({"x", "y"}, {{1.0, 2.0}, {3.0, 4.0}}).rfind("x,y\n", 0) == 0);
}

TEST_CASE("lab verbs write reproducible artifacts") {
  const fs::path out = fs::temp_directory_path() / "heatlab_unit_out";
  fs::remove_all(out);
  const auto config = parse_config(kHardy);
  const auto sink = OutputSink::for_experiment(config, out.string(), {"csv", "json"});
  CHECK(sink.dir == out / "hardy_unit");
  const auto rep = run_verb(Verb::Exponents, config, sink);
  CHECK(rep.all_pass());
  const auto first = slurp(sink.dir / "report.json");
  run_verb(Verb::Exponents, config, sink);
  CHECK(slurp(sink.dir / "report.json") == first);
  CHECK(fs::exists(sink.dir / "exponents.csv"));
  CHECK_FALSE(fs::exists(sink.dir / "exponents.svg"));

  const auto spec = run_verb(Verb::Spectrum, config, sink);
  CHECK(spec.all_pass());
  CHECK(parse_verb("kernel") == Verb::Kernel);
  CHECK_FALSE(parse_verb("verify").has_value());
  fs::remove_all(out);
}

TEST_CASE("svg plots are self-contained documents") {
  const auto doc = svg::line_plot({{"a", {1, 10, 100}, {1, 2, 3}}, {"b", {1, 10, 100}, {3, 2, 1}, true}},
                                  {"t", "x", "y", true, false});
  CHECK(doc.rfind("<svg", 0) == 0);
  CHECK(doc.find("</svg>") != std::string::npos);
  CHECK(doc.find("stroke-dasharray") != std::string::npos);
}
