#include "heatlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "heatlab/error.hpp"
#include "heatlab/numerics.hpp"

namespace heatlab {

std::string to_string(BoundaryKind kind) {
  return kind == BoundaryKind::NaturalH1 ? "natural" : "dirichlet";
}

namespace {

std::vector<double> make_faces(double d, BoundaryKind boundary, const SpectralGrid& g) {
  const double h = g.xi_max / g.cells;
  std::vector<double> faces{0.0};
  if (g.graded || d < 2.0 || boundary == BoundaryKind::DirichletH10) {
    double w = g.first_face;
    while (w < h && faces.back() + w < g.xi_max) {
      faces.push_back(faces.back() + w);
      w *= g.ratio;
    }
  }
  const double start = faces.back();
  const int rest = std::max(1, static_cast<int>(std::ceil((g.xi_max - start) / h)));
  for (int i = 1; i <= rest; ++i) faces.push_back(start + (g.xi_max - start) * i / rest);
  return faces;
}

// int_0^b xi^{d-1} e^{xi^2/4} by its power series.
double mass_near_origin(double d, double b) {
  double term = 1.0, total = 0.0;
  const double z = 0.25 * b * b;
  for (int k = 0; k < 40; ++k) {
    total += term / (d + 2.0 * k);
    term *= z / (k + 1.0);
    if (term < 1e-18 * total) break;
  }
  return std::pow(b, d) * total;
}

// Sturm count: number of eigenvalues of the symmetric tridiagonal (a, b) below x.
int sturm_count(const std::vector<double>& a, const std::vector<double>& b, double x) {
  int count = 0;
  double q = a[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < a.size(); ++i) {
    const double prev = q == 0.0 ? 1e-300 : q;
    q = a[i] - x - b[i - 1] * b[i - 1] / prev;
    if (q < 0) ++count;
  }
  return count;
}

}  // namespace

std::vector<double> WeightedOperator::apply(const std::vector<double>& w) const {
  const std::size_t n = size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double flux = 0.0;
    if (i > 0) flux += trans[i - 1] * (w[i] - w[i - 1]);
    if (i + 1 < n) flux += trans[i] * (w[i] - w[i + 1]);
    if (i == 0) flux += trans_origin * w[0];
    if (i + 1 == n) flux += trans_outer * w[i];
    out[i] = flux / mass[i] - 0.5 * d * w[i];
  }
  return out;
}

double WeightedOperator::inner(const std::vector<double>& u, const std::vector<double>& v) const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += mass[i] * u[i] * v[i];
  return s;
}

WeightedOperator assemble(double d, BoundaryKind boundary, SpectralGrid grid) {
  if (!(d > 0.0)) throw Error(ErrorKind::DegenerateDimension, "weighted operator needs d > 0");
  if (grid.xi_max < 10.0) throw Error(ErrorKind::OutOfRange, "xi_max must be at least 10");
  WeightedOperator op;
  op.d = d;
  op.boundary = boundary;
  op.faces = make_faces(d, boundary, grid);
  const std::size_t n = op.faces.size() - 1;
  op.xi.resize(n);
  op.mass.resize(n);
  op.trans.resize(n - 1);
  const auto rho = [d](double x) { return std::pow(x, d - 1.0) * std::exp(0.25 * x * x); };
  const auto inv_rho = [d](double x) { return std::pow(x, 1.0 - d) * std::exp(-0.25 * x * x); };
  for (std::size_t i = 0; i < n; ++i) {
    const double a = op.faces[i], b = op.faces[i + 1];
    op.xi[i] = 0.5 * (a + b);
    op.mass[i] = i == 0 ? mass_near_origin(d, b) : num::integrate(rho, a, b, 1, 8);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = op.xi[i], b = op.xi[i + 1];
    const int panels = i == 0 ? 4 : 1;
    double resist;
    if (i == 0) {
      // The first node sits at half the first cell; split at the face.
      resist = num::integrate(inv_rho, a, op.faces[1], panels, 8) +
               num::integrate(inv_rho, op.faces[1], b, panels, 8);
    } else {
      resist = num::integrate(inv_rho, a, b, panels, 8);
    }
    op.trans[i] = 1.0 / resist;
  }
  op.trans_outer = 1.0 / num::integrate(inv_rho, op.xi.back(), op.faces.back(), 1, 8);
  if (boundary == BoundaryKind::DirichletH10 && d < 2.0) {
    // int_0^{xi_0} xi^{1-d} e^{-xi^2/4}: series for the singular part.
    const double x0 = op.xi[0];
    double term = 1.0, total = 0.0;
    const double z = -0.25 * x0 * x0;
    for (int k = 0; k < 40; ++k) {
      total += term / (2.0 - d + 2.0 * k);
      term *= z / (k + 1.0);
      if (std::abs(term) < 1e-18) break;
    }
    op.trans_origin = 1.0 / (std::pow(x0, 2.0 - d) * total);
  }
  return op;
}

std::vector<double> EigenDecomposition::project(const std::vector<double>& w,
                                                std::size_t k) const {
  double c = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) c += mass[i] * w[i] * vectors[k][i];
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = c * vectors[k][i];
  return out;
}

EigenDecomposition eigensolve(const WeightedOperator& op, int count, int max_iterations) {
  if (count < 1 || count > 8) throw Error(ErrorKind::OutOfRange, "eigensolve count must be 1..8");
  const std::size_t n = op.size();
  // Symmetrized matrix S = M^{-1/2} (K - d/2 M) M^{-1/2}.
  std::vector<double> a(n), b(n - 1), sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = std::sqrt(op.mass[i]);
  for (std::size_t i = 0; i < n; ++i) {
    double k = 0.0;
    if (i > 0) k += op.trans[i - 1];
    if (i + 1 < n) k += op.trans[i];
    if (i == 0) k += op.trans_origin;
    if (i + 1 == n) k += op.trans_outer;
    a[i] = k / op.mass[i] - 0.5 * op.d;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) b[i] = -op.trans[i] / (sq[i] * sq[i + 1]);

  double lo = a[0], hi = a[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double rad = (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i + 1 < n ? std::abs(b[i]) : 0.0);
    lo = std::min(lo, a[i] - rad);
    hi = std::max(hi, a[i] + rad);
  }

  EigenDecomposition out;
  out.d = op.d;
  out.boundary = op.boundary;
  out.xi = op.xi;
  out.mass = op.mass;
  std::vector<std::vector<double>> sym_vectors;
  for (int k = 0; k < count; ++k) {
    double l = lo, h = hi;
    for (int it = 0; it < 200 && h - l > 1e-14 * std::max(1.0, std::abs(l)); ++it) {
      const double mid = 0.5 * (l + h);
      if (sturm_count(a, b, mid) > k) h = mid;
      else l = mid;
    }
    const double mu = 0.5 * (l + h);
    // Inverse iteration with a slightly perturbed shift.
    const double shift = mu + 1e-10 * std::max(1.0, std::abs(mu));
    std::vector<double> x(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.01 * std::sin(0.37 * i + k);
    double residual = 0.0;
    bool converged = false;
    std::vector<double> previous = x;
    for (int it = 0; it < max_iterations; ++it) {
      std::vector<double> diag(n), lower(n, 0.0), upper(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) diag[i] = a[i] - shift;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        upper[i] = b[i];
        lower[i + 1] = b[i];
      }
      if (!num::solve_tridiagonal(lower, diag, upper, x))
        throw Error(ErrorKind::ConvergenceFailure, "singular shifted matrix in inverse iteration");
      for (const auto& prev : sym_vectors) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) c += prev[i] * x[i];
        for (std::size_t i = 0; i < n; ++i) x[i] -= c * prev[i];
      }
      double norm = 0.0;
      for (double v : x) norm += v * v;
      norm = std::sqrt(norm);
      for (double& v : x) v /= norm;
      residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = a[i] * x[i] - mu * x[i];
        if (i > 0) s += b[i - 1] * x[i - 1];
        if (i + 1 < n) s += b[i] * x[i + 1];
        residual += s * s;
      }
      residual = std::sqrt(residual);
      // The shifted inverse may flip the sign each sweep; compare up to sign.
      double same = 0.0, flipped = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        same = std::max(same, std::abs(x[i] - previous[i]));
        flipped = std::max(flipped, std::abs(x[i] + previous[i]));
      }
      const double change = std::min(same, flipped);
      previous = x;
      if (it >= 1 && (residual < 1e-10 * std::max(1.0, std::abs(mu)) || change < 1e-12)) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "eigenpair " << k << " residual " << residual;
      throw Error(ErrorKind::ConvergenceFailure, os.str());
    }
    sym_vectors.push_back(x);
    std::vector<double> v(n);
    double head = 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i] / sq[i];
    for (std::size_t i = 0; i < std::min<std::size_t>(n, 20); ++i) head += v[i];
    if (head < 0.0)
      for (double& e : v) e = -e;
    out.eigenvalues.push_back(mu);
    out.vectors.push_back(std::move(v));
    out.residuals.push_back(residual);
  }
  for (int k = 0; k + 1 < count; ++k)
    out.gaps.push_back(out.eigenvalues[k + 1] - out.eigenvalues[k]);
  return out;
}

double hermite_normalization(double d) {
  return std::exp(-0.5 * ((d - 1.0) * std::numbers::ln2 + std::lgamma(0.5 * d)));
}

HermiteReport hermite_check(const EigenDecomposition& decomp) {
  HermiteReport rep;
  const double cd = hermite_normalization(decomp.d);
  for (std::size_t i = 0; i < decomp.xi.size(); ++i) {
    const double x = decomp.xi[i];
    rep.psi0_sup_deviation =
        std::max(rep.psi0_sup_deviation, std::abs(decomp.vectors[0][i] - cd * std::exp(-0.25 * x * x)));
  }
  for (std::size_t k = 0; k < decomp.eigenvalues.size(); ++k) {
    const double dev = std::abs(decomp.eigenvalues[k] - static_cast<double>(k));
    rep.eigenvalue_deviation.push_back(dev);
    rep.max_eigenvalue_deviation = std::max(rep.max_eigenvalue_deviation, dev);
  }
  return rep;
}

std::vector<double> convergence_orders(double d, BoundaryKind boundary,
                                       const std::vector<double>& exact, SpectralGrid coarse) {
  const int count = static_cast<int>(exact.size());
  std::vector<std::vector<double>> errors;
  SpectralGrid g = coarse;
  for (int level = 0; level < 2; ++level) {
    const auto dec = eigensolve(assemble(d, boundary, g), count);
    std::vector<double> e(count);
    for (int k = 0; k < count; ++k) e[k] = std::abs(dec.eigenvalues[k] - exact[k]);
    errors.push_back(e);
    g.cells *= 2;
    g.first_face *= 0.5;
    g.ratio = 1.0 + 0.5 * (g.ratio - 1.0);
  }
  std::vector<double> orders(count);
  for (int k = 0; k < count; ++k)
    orders[k] = std::log2(errors[0][k] / errors[1][k]);
  return orders;
}

std::string decomposition_csv(const EigenDecomposition& decomp) {
  std::ostringstream os;
  os << std::setprecision(16) << std::scientific << "xi";
  for (std::size_t k = 0; k < decomp.vectors.size(); ++k) os << ",psi" << k;
  os << '\n';
  for (std::size_t i = 0; i < decomp.xi.size(); ++i) {
    os << decomp.xi[i];
    for (const auto& v : decomp.vectors) os << ',' << v[i];
    os << '\n';
  }
  return os.str();
}

}  // namespace heatlab
