#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace heatlab {

enum class Gauge { U, Star, SelfSim };

std::string to_string(Gauge gauge);

/// Radial samples tagged with their gauge and time stamp.  For the self-similar
/// gauge `r` holds xi and `s` is the primary stamp; otherwise `t` is.
struct RadialField {
  Gauge gauge = Gauge::Star;
  std::vector<double> r;
  std::vector<double> values;
  double t = 0.0;
  double s = 0.0;

  static RadialField at_time(Gauge gauge, std::vector<double> r, std::vector<double> values,
                             double t) {
    return {gauge, std::move(r), std::move(values), t, std::log1p(t)};
  }
};

}  // namespace heatlab
