#include "gibbswave/smoothing.hpp"

#include <cmath>
#include <stdexcept>

namespace gibbswave {

namespace {
inline double bump(double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; }
}

double smooth_cutoff(double x) {
  double ax = std::abs(x);
  double num = bump(2.0 * (1.0 - ax));
  double den = num + bump(2.0 * ax - 1.0);
  // den > 0 always: the two supports [0,1) and (1/2,inf) cover [0,inf)
  return num / den;
}

SmoothingProfile make_smoothing(int n_cut, int n_max) {
  if (n_cut < 1 || n_max < 1)
    throw std::invalid_argument("make_smoothing: n_cut and n_max must be >= 1");
  SmoothingProfile s;
  s.n_cut = n_cut;
  s.multipliers.resize(n_max);
  for (int n = 1; n <= n_max; ++n) {
    double ratio = static_cast<double>(n) / n_cut;
    s.multipliers[n - 1] = smooth_cutoff(ratio * ratio);
  }
  return s;
}

SpectralState apply_smoothing(const SpectralState& u,
                              const SmoothingProfile& s) {
  if (u.coeffs.size() > s.multipliers.size())
    throw std::invalid_argument(
        "apply_smoothing: profile does not cover the state's modes");
  SpectralState v;
  v.coeffs.resize(u.coeffs.size());
  for (std::size_t i = 0; i < u.coeffs.size(); ++i)
    v.coeffs[i] = u.coeffs[i] * s.multipliers[i];
  return v;
}

}  // namespace gibbswave
