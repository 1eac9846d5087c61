#pragma once

#include "gibbswave/basis.hpp"
#include "gibbswave/sampling.hpp"
#include "gibbswave/smoothing.hpp"
#include "gibbswave/state.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace gibbswave {

// Parameters of the truncated flow on E_N.  dt's sign selects the time
// direction (the reversibility check runs dt -> -dt); t_final >= 0 is the
// elapsed duration.  `nonlinear = false` switches the force off, leaving the
// free rotation (used by linear-control checks).
struct SimParams {
  double dt = 1e-3;
  double t_final = 1.0;
  double alpha = 2.0;
  int n_modes = 64;
  std::shared_ptr<const RadialQuadrature> quad;
  SmoothingProfile smoothing;
  int record_every = 100;
  bool nonlinear = true;
};

// Builds SimParams with the smoothing profile derived from n_modes and the
// quadrature's mode range.  dt = 0 selects the default step: 1e-3 for
// n_modes <= 64, scaled as 64/n_modes beyond (accuracy-, not
// stability-limited).
SimParams make_sim_params(double alpha, int n_modes, double dt, double t_final,
                          int record_every,
                          std::shared_ptr<const RadialQuadrature> quad);

// Conserved energy of the truncated flow:
//   H = (1/2) sum (pi n)^2 |c_n|^2 + (1/(alpha+2)) ||S_N(Re u)||^{a+2}_{L^{a+2}}
// truncated = false drops the S_N inside the potential term (the energy of
// the untruncated equation).
double hamiltonian(const SpectralState& u, const GibbsSpec& spec,
                   bool truncated = true);

// Pointwise force F(x) = |x|^alpha x = sign(x) |x|^{alpha+1}; odd, F(0) = 0.
double nonlinearity(double x, double alpha);

// One Strang step of (d/dt) u = -i sqrt(-Lap) u - i S_N sqrt(-Lap)^{-1}
// F(S_N Re u).  The force has real coefficients, so its exact flow is a
// shear: Re u frozen, Im c_n -= h * m_n <F(S_N Re u), e_n> / (pi n).
// Substeps: shear(dt/2), rotation(dt), shear(dt/2) — each preserves
// Lebesgue volume in (Re c, Im c) exactly.
SpectralState flow_step(const SpectralState& u, const SimParams& p);

struct Observer {
  std::string name;
  // Called with the current state and elapsed time at record points.
  std::function<double(const SpectralState&, double)> fn;
};

struct TrajectoryRecord {
  std::vector<double> times;  // elapsed, strictly increasing, starts at 0
  std::vector<std::string> observable_names;
  std::vector<std::vector<double>> series;  // series[k][i] = obs k at times[i]
  SpectralState final_state;
  std::uint64_t steps = 0;
};

// Repeated flow_step to t_final, recording observers every record_every
// steps and at the final step.  Throws (with step/time diagnostics) if the
// state goes nonfinite — the signature of dt too large.
TrajectoryRecord evolve(const SpectralState& u0, const SimParams& p,
                        const std::vector<Observer>& observers);

// Independent cross-check solver: collocation Picard iteration on the
// Duhamel form
//   u(t) = S(t)u0 - i int_0^t S(t-tau) sqrt(-Lap)^{-1} F(Re u(tau)) dtau
// with 8-node Gauss-Legendre panels, panel count doubled until the final
// state moves by less than tol in H^{0.4}.  With truncated = true the
// integrand carries S_N exactly as in the split-step flow.  Throws if the
// inner iteration fails to contract within max_iter (T beyond the
// contraction regime) or panel doubling stalls.
SpectralState picard_duhamel(const SpectralState& u0, const GibbsSpec& spec,
                             double T, double tol = 1e-10, int max_iter = 200,
                             bool truncated = true);

}  // namespace gibbswave
