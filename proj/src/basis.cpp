#include "gibbswave/basis.hpp"

#include "gibbswave/config.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gibbswave {

namespace {
constexpr double kPi = std::numbers::pi;
}

void gauss_legendre(int q, double a, double b, std::vector<double>& x,
                    std::vector<double>& w) {
  if (q < 1) throw std::invalid_argument("gauss_legendre: q must be >= 1");
  x.assign(q, 0.0);
  w.assign(q, 0.0);
  // Newton iteration on P_q from Chebyshev initial guesses; nodes come in
  // +/- pairs on (-1,1).
  int half = (q + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (q + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= q; ++k) {
        double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      pp = q * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    double weight = 2.0 / ((1.0 - z * z) * pp * pp);
    x[i] = -z;
    x[q - 1 - i] = z;
    w[i] = weight;
    w[q - 1 - i] = weight;
  }
  // affine map (-1,1) -> (a,b)
  double mid = 0.5 * (a + b), halfwidth = 0.5 * (b - a);
  for (int i = 0; i < q; ++i) {
    x[i] = mid + halfwidth * x[i];
    w[i] *= halfwidth;
  }
}

double eigenfunction(int n, double r) {
  const double norm = 1.0 / std::sqrt(2.0 * kPi);
  double x = n * kPi * r;
  if (r < 1e-3) {
    // sin(x)/x by series; covers the removable singularity at r = 0.
    // x <= 256*pi*1e-3 < 0.81 in practice, and terms through x^18 put the
    // truncation error below machine epsilon for x < 1.
    double x2 = x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 9; ++k) {
      term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
      sum += term;
    }
    return n * kPi * sum * norm;
  }
  return std::sin(x) / r * norm;
}

const double* RadialQuadrature::mode(int n) const {
  if (n < 1 || n > n_max)
    throw std::invalid_argument("RadialQuadrature::mode: n out of range");
  return basis_samples.data() + static_cast<std::size_t>(n - 1) * nodes.size();
}

double RadialQuadrature::eigenvalue(int n) const {
  if (n < 1 || n > n_max)
    throw std::invalid_argument("RadialQuadrature::eigenvalue: n out of range");
  return (kPi * n) * (kPi * n);
}

RadialQuadrature build_basis(int n_max, int n_quad, double gram_tol) {
  if (n_max < 1) throw std::invalid_argument("build_basis: n_max must be >= 1");
  if (n_quad == 0) n_quad = std::max(4 * n_max, 128);
  if (n_quad < 8) throw std::invalid_argument("build_basis: n_quad too small");

  RadialQuadrature quad;
  quad.n_max = n_max;
  gauss_legendre(n_quad, 0.0, 1.0, quad.nodes, quad.weights);
  for (int j = 0; j < n_quad; ++j)
    quad.weights[j] *= 4.0 * kPi * quad.nodes[j] * quad.nodes[j];

  quad.basis_samples.resize(static_cast<std::size_t>(n_max) * n_quad);
  for (int n = 1; n <= n_max; ++n) {
    double* row = quad.basis_samples.data() +
                  static_cast<std::size_t>(n - 1) * n_quad;
    for (int j = 0; j < n_quad; ++j) row[j] = eigenfunction(n, quad.nodes[j]);
  }

  // Orthonormality is the ground truth for the closed form: reject the
  // build if the Gram matrix strays from the identity.
  double worst = 0.0;
  for (int m = 1; m <= n_max; ++m) {
    const double* rm = quad.mode(m);
    for (int n = m; n <= n_max; ++n) {
      const double* rn = quad.mode(n);
      double acc = 0.0;
      for (int j = 0; j < n_quad; ++j) acc += quad.weights[j] * rm[j] * rn[j];
      double dev = std::abs(acc - (m == n ? 1.0 : 0.0));
      if (dev > worst) worst = dev;
    }
  }
  if (worst > gram_tol)
    throw numerical_error(
        "build_basis: Gram check failed (max deviation " +
        std::to_string(worst) + " > tolerance at n_quad = " +
        std::to_string(n_quad) + "); increase the quadrature order");
  return quad;
}

}  // namespace gibbswave
