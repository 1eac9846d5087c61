#pragma once

#include "gibbswave/state.hpp"

#include <vector>

namespace gibbswave {

// Spectral multipliers m_n = chi(n^2/N^2): identity on modes n <= N/sqrt(2),
// zero from n = N on, smoothly nonincreasing in between.
struct SmoothingProfile {
  int n_cut = 0;                    // N
  std::vector<double> multipliers;  // m_n for n = 1..n_max
};

// Smooth step: 1 on [0, 1/2], 0 on [1, inf), C^infinity.  Built from
// g(y) = exp(-1/y) (y > 0): chi(x) = g(2(1-|x|)) / (g(2(1-|x|)) + g(2|x|-1)).
double smooth_cutoff(double x);

SmoothingProfile make_smoothing(int n_cut, int n_max);

// c_n -> m_n c_n.  Throws if the profile does not cover u's modes.
SpectralState apply_smoothing(const SpectralState& u, const SmoothingProfile& s);

}  // namespace gibbswave
