#include "gibbswave/sampling.hpp"

#include "gibbswave/config.hpp"
#include "internal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gibbswave {

namespace {
constexpr double kPi = std::numbers::pi;
}

GibbsSpec::GibbsSpec(double alpha_, int n_modes_,
                     std::shared_ptr<const RadialQuadrature> quad_)
    : alpha(alpha_), n_modes(n_modes_), quad(std::move(quad_)) {
  if (!(alpha > 0.0 && alpha < 3.0))
    throw std::invalid_argument("GibbsSpec: alpha must lie in (0,3), got " +
                                std::to_string(alpha));
  if (n_modes < 1)
    throw std::invalid_argument("GibbsSpec: n_modes must be >= 1");
  if (!quad) throw std::invalid_argument("GibbsSpec: quadrature is null");
  if (quad->n_max < n_modes)
    throw std::invalid_argument(
        "GibbsSpec: quadrature covers fewer modes than n_modes");
  smoothing = make_smoothing(n_modes, quad->n_max);
}

SpectralState sample_gaussian(const GibbsSpec& spec, GaussianStream& g) {
  SpectralState u;
  u.coeffs.resize(spec.n_modes);
  for (int n = 1; n <= spec.n_modes; ++n)
    u.coeffs[n - 1] = g.next_complex_gaussian() / (n * kPi);
  return u;
}

double gibbs_weight(const SpectralState& u, const GibbsSpec& spec) {
  int n = std::min<int>(u.n_modes(), spec.n_modes);
  std::vector<double> a(n);
  for (int k = 0; k < n; ++k)
    a[k] = spec.smoothing.multipliers[k] * u.coeffs[k].real();
  std::vector<double> grid;
  double pot =
      detail::lp_pow_p_real(a.data(), n, *spec.quad, spec.alpha + 2.0, grid);
  return std::exp(-pot / (spec.alpha + 2.0));
}

GibbsSample sample_gibbs(const GibbsSpec& spec, GaussianStream& g,
                         std::uint64_t max_attempts) {
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    SpectralState u = sample_gaussian(spec, g);
    double f = gibbs_weight(u, spec);
    // uniform is in (0,1], f in (0,1]: accept with probability exactly f
    if (g.next_uniform() <= f) return GibbsSample{std::move(u), attempt};
  }
  throw numerical_error(
      "sample_gibbs: exceeded " + std::to_string(max_attempts) +
      " rejection attempts; acceptance rate is pathologically small");
}

PartitionEstimate partition_estimate(const GibbsSpec& spec, int n_samples,
                                     SeededStream stream) {
  if (n_samples < 100)
    throw std::invalid_argument(
        "partition_estimate: n_samples must be >= 100");
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    GaussianStream g(
        {stream.seed, stream.stream_id + static_cast<std::uint64_t>(i)});
    SpectralState u = sample_gaussian(spec, g);
    double f = gibbs_weight(u, spec);
    sum += f;
    sum_sq += f * f;
  }
  PartitionEstimate est;
  est.n_samples = n_samples;
  est.mean = sum / n_samples;
  double var = (sum_sq - sum * sum / n_samples) / (n_samples - 1);
  est.std_err = std::sqrt(std::max(var, 0.0) / n_samples);
  return est;
}

}  // namespace gibbswave
