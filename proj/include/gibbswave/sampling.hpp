#pragma once

#include "gibbswave/basis.hpp"
#include "gibbswave/rng.hpp"
#include "gibbswave/smoothing.hpp"
#include "gibbswave/state.hpp"

#include <cstdint>
#include <memory>

namespace gibbswave {

// Everything needed to evaluate the Gibbs density on E_N.  alpha in (0,3) is
// enforced at construction; the smoothing profile is built with n_cut =
// n_modes over the quadrature's mode range.
struct GibbsSpec {
  double alpha = 2.0;
  int n_modes = 64;
  std::shared_ptr<const RadialQuadrature> quad;
  SmoothingProfile smoothing;

  GibbsSpec(double alpha_, int n_modes_,
            std::shared_ptr<const RadialQuadrature> quad_);
};

// mu_N: c_n = (h_n + i l_n)/(n pi), h_n, l_n iid N(0,1), n <= N.
SpectralState sample_gaussian(const GibbsSpec& spec, GaussianStream& g);

// f_N(u) = exp(-(1/(alpha+2)) ||S_N(Re u)||_{L^{alpha+2}}^{alpha+2}).
// Depends on Re u only.
double gibbs_weight(const SpectralState& u, const GibbsSpec& spec);

struct GibbsSample {
  SpectralState state;
  std::uint64_t attempts = 0;
};

// rho_N by rejection from mu_N: accept with probability f_N (exact since
// f_N <= 1).  Throws after max_attempts consecutive rejections.
GibbsSample sample_gibbs(const GibbsSpec& spec, GaussianStream& g,
                         std::uint64_t max_attempts = 1000000);

struct PartitionEstimate {
  double mean = 0;
  double std_err = 0;
  int n_samples = 0;
};

// Monte Carlo estimate of E_{mu_N}[f_N] = rho_N(E_N) (the rejection
// acceptance rate).  Requires n_samples >= 100.  Sample i draws from stream
// stream_id + i, so estimates at different N reuse the same underlying
// Gaussians mode-for-mode (common random numbers: differences across N have
// far less variance than the estimates themselves).
PartitionEstimate partition_estimate(const GibbsSpec& spec, int n_samples,
                                     SeededStream stream);

}  // namespace gibbswave
