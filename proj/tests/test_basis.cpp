#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fd_residual.hpp"
#include "gibbswave/basis.hpp"
#include "gibbswave/config.hpp"

using namespace gibbswave;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gauss_legendre integrates monomials exactly up to degree 2q-1") {
  std::vector<double> x, w;
  gauss_legendre(6, 0.0, 1.0, x, w);
  REQUIRE(x.size() == 6);
  for (int k = 0; k <= 11; ++k) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) s += w[i] * std::pow(x[i], k);
    CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }
}

TEST_CASE("gauss_legendre nodes are interior and increasing, weights positive") {
  std::vector<double> x, w;
  gauss_legendre(24, 0.0, 1.0, x, w);
  double wsum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i] > 0.0);
    CHECK(x[i] < 1.0);
    if (i > 0) CHECK(x[i] > x[i - 1]);
    CHECK(w[i] > 0.0);
    wsum += w[i];
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quadrature weights carry the volume element: sum = 4 pi / 3") {
  RadialQuadrature quad = build_basis(32);
  double wsum = 0.0;
  for (double w : quad.weights) wsum += w;
  CHECK(wsum == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-13));
  CHECK(quad.n_max == 32);
  CHECK(quad.n_quad() == 128);
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    CHECK(quad.nodes[i] > 0.0);
    CHECK(quad.nodes[i] < 1.0);
  }
}

TEST_CASE("basis is orthonormal under the stored quadrature") {
  RadialQuadrature quad = build_basis(32);
  double max_dev = 0.0;
  for (int n = 1; n <= 32; ++n) {
    for (int m = n; m <= 32; ++m) {
      double g = 0.0;
      const double* en = quad.mode(n);
      const double* em = quad.mode(m);
      for (int i = 0; i < quad.n_quad(); ++i) g += quad.weights[i] * en[i] * em[i];
      max_dev = std::max(max_dev, std::abs(g - (n == m ? 1.0 : 0.0)));
    }
  }
  CHECK(max_dev <= 1e-8);
}

TEST_CASE("build_basis rejects a quadrature too coarse for the requested modes") {
  CHECK_THROWS_AS(build_basis(32, 64), numerical_error);
  CHECK_THROWS_AS(build_basis(0), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(8, 7), std::invalid_argument);
}

TEST_CASE("eigenvalue is (pi n)^2 and mode() bounds are enforced") {
  RadialQuadrature quad = build_basis(4);
  for (int n = 1; n <= 4; ++n)
    CHECK(quad.eigenvalue(n) == kPi * n * kPi * n);
  CHECK_THROWS_AS(quad.mode(0), std::invalid_argument);
  CHECK_THROWS_AS(quad.mode(5), std::invalid_argument);
}

TEST_CASE("eigenfunction at the origin approaches n pi / sqrt(2 pi)") {
  // lim_{r->0} sin(n pi r) / (r sqrt(2 pi)) = n pi / sqrt(2 pi);
  // for n = 1 that is sqrt(pi / 2).
  CHECK(eigenfunction(1, 1e-12) == doctest::Approx(std::sqrt(kPi / 2.0)).epsilon(1e-12));
  CHECK(eigenfunction(3, 1e-12) ==
        doctest::Approx(3.0 * kPi / std::sqrt(2.0 * kPi)).epsilon(1e-12));
}

TEST_CASE("eigenfunction series branch matches the direct formula at the seam") {
  for (int n : {1, 2, 7, 32}) {
    const double below = eigenfunction(n, 1e-3 - 1e-9);
    const double above = eigenfunction(n, 1e-3 + 1e-9);
    CHECK(std::abs(below - above) <= 1e-8 * std::abs(above));
  }
}

TEST_CASE("eigenfunction vanishes at the boundary") {
  for (int n : {1, 5, 64}) CHECK(std::abs(eigenfunction(n, 1.0)) <= 1e-12);
}

TEST_CASE("eigenfunctions satisfy the radial Helmholtz relation") {
  // -(e'' + (2/r) e') = (pi n)^2 e, checked by fourth-order finite
  // differences on a uniform grid.
  for (int n : {1, 5, 17, 32}) CHECK(eigen_relation_residual(n) <= 1e-4);
}
