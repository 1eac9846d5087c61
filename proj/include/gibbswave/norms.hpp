#pragma once

#include "gibbswave/basis.hpp"
#include "gibbswave/state.hpp"

namespace gibbswave {

// (sum_j w_j |u(r_j)|^p)^{1/p} with u evaluated on the quadrature grid.
// Note: this is the modulus of the complex field; the norm entering the
// Hamiltonian and the Gibbs weight is the one of Re(u) only (those call
// sites build a real-coefficient state first).  Requires p >= 1 and
// quad.n_max >= u.n_modes().
double lp_norm_ball(const SpectralState& u, const RadialQuadrature& quad,
                    double p);

// (int_0^2 ||S(t)u0||_{L^p(ball)}^p dt)^{1/p} by composite 4-point
// Gauss-Legendre over t_nodes panels.  The integrand is 2-periodic in t, so
// this is also the norm over any length-2 window such as [-1,1].
// Requires p in [2,6) and t_nodes >= 16.
double spacetime_lp_norm(const SpectralState& u0, const RadialQuadrature& quad,
                         double p, int t_nodes = 64);

// |x|^p with a fast path for integer p (the hot loops use p = 3..5).
double pow_abs(double x, double p);

}  // namespace gibbswave
