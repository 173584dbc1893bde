#include "heatlab/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

#include "heatlab/error.hpp"

namespace heatlab {

const char* const kLabVersion = "heatlab 1.0.0";

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm: return "closed form";
    case Provenance::TheoremConstant: return "theorem constant";
    case Provenance::Oracle: return "oracle";
  }
  return "unknown";
}

CheckRecord CheckRecord::compare(std::string name, double measured, double expected,
                                 double tolerance, Provenance provenance, std::string note) {
  CheckRecord c;
  c.name = std::move(name);
  c.measured = measured;
  c.expected = expected;
  c.tolerance = tolerance;
  c.pass = std::isfinite(measured) && std::abs(measured - expected) <= tolerance;
  c.provenance = provenance;
  c.note = std::move(note);
  return c;
}

bool AsymptoticsReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

namespace {

// Non-finite values have no JSON literal; they are written as strings.
nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::ordered_json AsymptoticsReport::to_json() const {
  nlohmann::ordered_json j;
  j["header"] = {{"version", kLabVersion}, {"experiment", experiment}, {"config_hash", config_hash}};
  nlohmann::ordered_json g = nlohmann::ordered_json::object();
  for (const auto& [k, v] : grid) g[k] = number(v);
  j["header"]["grid"] = g;
  j["classification"] = classification;
  j["c_star"] = number(c_star);
  j["m"] = number(m);
  j["M"] = number(M);
  auto checks_json = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json r;
    r["name"] = c.name;
    r["measured"] = number(c.measured);
    r["expected"] = number(c.expected);
    r["tolerance"] = number(c.tolerance);
    r["pass"] = c.pass;
    r["provenance"] = to_string(c.provenance);
    if (!c.note.empty()) r["note"] = c.note;
    checks_json.push_back(std::move(r));
  }
  j["checks"] = std::move(checks_json);
  nlohmann::ordered_json rj = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rates) rj[k] = number(v);
  j["rates"] = std::move(rj);
  j["warnings"] = warnings;
  j["pass"] = all_pass();
  return j;
}

std::string AsymptoticsReport::dump() const { return to_json().dump(2) + "\n"; }

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size())
    throw Error(ErrorKind::GridMismatch, "CSV header and column count differ");
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != rows) throw Error(ErrorKind::GridMismatch, "CSV columns differ in length");
  std::ostringstream out;
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j)
      out << (j ? "," : "") << format_number(columns[j][i]);
    out << '\n';
  }
  return out.str();
}

}  // namespace heatlab
