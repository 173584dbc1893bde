#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace heatlab::num {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
double integrate(const std::function<double(double)>& f, double a, double b, int panels = 1,
                 int order = 8);

/// Composite Gauss-Legendre in log r over [a, b], a > 0; panel count chosen
/// from the number of decades spanned.
double integrate_log(const std::function<double(double)>& f, double a, double b,
                     int panels_per_decade = 16, int order = 8);

/// Thomas algorithm.  `lower[i]` couples row i to i-1 (lower[0] unused),
/// `upper[i]` couples row i to i+1 (upper[n-1] unused).  Returns false on a
/// zero pivot.
bool solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares coefficients for y ~ sum_j c_j basis_j(x).
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  std::span<const double> y);

/// Value at 0 of the polynomial in r^2 through three (r, f) samples.
double extrapolate_to_origin(std::span<const double> r, std::span<const double> f);

/// Piecewise cubic Hermite interpolant with three-point slopes limited by the
/// Fritsch-Carlson condition, so monotone data stay monotone.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, slope_;
};

/// Cubic Hermite interpolation on one interval.
inline double hermite(double t, double h, double y0, double y1, double d0, double d1) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * d1;
}

}  // namespace heatlab::num
