#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace heatlab {

/// Where the expected value of a check comes from.
enum class Provenance { ClosedForm, TheoremConstant, Oracle };

std::string to_string(Provenance p);

struct CheckRecord {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;  // pass iff |measured - expected| <= tolerance
  bool pass = false;
  Provenance provenance = Provenance::ClosedForm;
  std::string note;

  static CheckRecord compare(std::string name, double measured, double expected, double tolerance,
                             Provenance provenance, std::string note = {});
};

struct AsymptoticsReport {
  std::string experiment;
  std::string classification;
  double c_star = 0.0;
  double m = 0.0;
  double M = 0.0;
  std::vector<CheckRecord> checks;
  std::map<std::string, double> rates;
  std::string config_hash;
  std::map<std::string, double> grid;
  std::vector<std::string> warnings;

  bool all_pass() const;
  nlohmann::ordered_json to_json() const;
  /// Indented JSON with a trailing newline; identical input gives identical bytes.
  std::string dump() const;
};

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Scientific notation with 17 significant digits.
std::string format_number(double x);

/// CSV text from a header and columns of equal length.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns);

extern const char* const kLabVersion;

}  // namespace heatlab
