#pragma once

#include <vector>

namespace gibbswave {

// Gauss-Legendre quadrature on (0,1) for radial integrals over the unit
// ball: the volume element 4*pi*r^2 dr is folded into the weights, so
// sum_j weights[j]*g(nodes[j]) ~ integral of g over the ball for radial g.
// basis_samples caches e_n(r_j) row-major for n = 1..n_max.
struct RadialQuadrature {
  int n_max = 0;
  std::vector<double> nodes;    // r_j in (0,1), increasing
  std::vector<double> weights;  // strictly positive
  std::vector<double> basis_samples;

  int n_quad() const { return static_cast<int>(nodes.size()); }
  const double* mode(int n) const;  // e_n sampled on nodes, n in [1, n_max]
  double eigenvalue(int n) const;   // (pi*n)^2
};

// L^2(ball)-normalized radial Dirichlet eigenfunction, eigenvalue (pi*n)^2:
// e_n(r) = sin(n*pi*r)/(r*sqrt(2*pi)), with a series branch below r = 1e-3
// (covers r = 0 by the limit n*pi/sqrt(2*pi)).
double eigenfunction(int n, double r);

// n_quad = 0 selects the default order max(4*n_max, 128).  Throws if the
// quadrature Gram matrix of {e_n} deviates from the identity by more than
// gram_tol (signals insufficient order).
RadialQuadrature build_basis(int n_max, int n_quad = 0, double gram_tol = 1e-8);

// Nodes/weights of q-point Gauss-Legendre on (a,b); used for the radial rule
// and for time quadrature panels.
void gauss_legendre(int q, double a, double b, std::vector<double>& x,
                    std::vector<double>& w);

}  // namespace gibbswave
