#include "heatlab/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "heatlab/error.hpp"

namespace heatlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SupercriticalParameter: return "SupercriticalParameter";
    case ErrorKind::DegenerateDimension: return "DegenerateDimension";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::NotNonnegative: return "NotNonnegative";
    case ErrorKind::AmbiguousTail: return "AmbiguousTail";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::SolverError: return "SolverError";
    case ErrorKind::NumericalBlowup: return "NumericalBlowup";
    case ErrorKind::DomainExhausted: return "DomainExhausted";
    case ErrorKind::NeedMoreCheckpoints: return "NeedMoreCheckpoints";
    case ErrorKind::ResolutionError: return "ResolutionError";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {
std::atomic<bool> g_warnings{true};
std::mutex g_log_mutex;
std::vector<std::string> g_log;
}  // namespace

void warn(const std::string& message) {
  {
    std::lock_guard lock(g_log_mutex);
    g_log.push_back(message);
  }
  if (g_warnings.load()) std::cerr << "warning: " << message << '\n';
}

std::vector<std::string> take_warnings() {
  std::lock_guard lock(g_log_mutex);
  return std::exchange(g_log, {});
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled); }

}  // namespace heatlab

namespace heatlab::num {

QuadratureRule gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  std::lock_guard lock(mutex);
  cache.emplace(n, rule);
  return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels,
                 int order) {
  const auto rule = gauss_legendre(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double s = 0.0;
    for (int k = 0; k < order; ++k) s += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
    total += 0.5 * h * s;
  }
  return total;
}

double integrate_log(const std::function<double(double)>& f, double a, double b,
                     int panels_per_decade, int order) {
  if (!(a > 0.0) || !(b > a)) return 0.0;
  const double decades = std::log10(b / a);
  const int panels = std::max(1, static_cast<int>(std::ceil(decades * panels_per_decade)));
  return integrate(
      [&](double x) {
        const double r = std::exp(x);
        return f(r) * r;
      },
      std::log(a), std::log(b), panels, order);
}

bool solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n);
  double beta = diag[0];
  if (beta == 0.0) return false;
  rhs[0] /= beta;
  for (std::size_t i = 1; i < n; ++i) {
    c[i] = upper[i - 1] / beta;
    beta = diag[i] - lower[i] * c[i];
    if (beta == 0.0) return false;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i + 1] * rhs[i + 1];
  return true;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - fit.intercept - fit.slope * x[i];
    ss += e * e;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  std::span<const double> y) {
  const Eigen::Index rows = static_cast<Eigen::Index>(y.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(columns.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    b(i) = y[i];
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = columns[j][i];
  }
  // Column scaling keeps the QR well conditioned when bases differ by decades.
  Eigen::VectorXd scale(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    scale(j) = a.col(j).norm();
    if (scale(j) == 0.0) scale(j) = 1.0;
    a.col(j) /= scale(j);
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  std::vector<double> out(cols);
  for (Eigen::Index j = 0; j < cols; ++j) out[j] = c(j) / scale(j);
  return out;
}

double extrapolate_to_origin(std::span<const double> r, std::span<const double> f) {
  const double z0 = r[0] * r[0], z1 = r[1] * r[1], z2 = r[2] * r[2];
  const double l0 = (z1 * z2) / ((z0 - z1) * (z0 - z2));
  const double l1 = (z0 * z2) / ((z1 - z0) * (z1 - z2));
  const double l2 = (z0 * z1) / ((z2 - z0) * (z2 - z1));
  return l0 * f[0] + l1 * f[1] + l2 * f[2];
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), slope_(x_.size()) {
  const std::size_t n = x_.size();
  if (n < 3 || y_.size() != n) throw std::invalid_argument("MonotoneCubic needs >= 3 points");
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  // Three-point (second-order) slopes on the nonuniform grid.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    slope_[i] = (h1 * delta[i - 1] + h0 * delta[i]) / (h0 + h1);
  }
  {
    const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
    slope_[0] = ((2 * h0 + h1) * delta[0] - h0 * delta[1]) / (h0 + h1);
    const double g0 = x_[n - 2] - x_[n - 3], g1 = x_[n - 1] - x_[n - 2];
    slope_[n - 1] = ((2 * g1 + g0) * delta[n - 2] - g1 * delta[n - 3]) / (g0 + g1);
  }
  // Fritsch-Carlson limiting.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      slope_[i] = 0.0;
      slope_[i + 1] = 0.0;
      continue;
    }
    if (slope_[i] * delta[i] < 0.0) slope_[i] = 0.0;
    if (slope_[i + 1] * delta[i] < 0.0) slope_[i + 1] = 0.0;
    const double a = slope_[i] / delta[i], b = slope_[i + 1] / delta[i];
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      slope_[i] = tau * a * delta[i];
      slope_[i + 1] = tau * b * delta[i];
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  return hermite((x - x_[i]) / h, h, y_[i], y_[i + 1], slope_[i], slope_[i + 1]);
}

}  // namespace heatlab::num
