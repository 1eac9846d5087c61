#include "gibbswave/statistics.hpp"

#include "gibbswave/config.hpp"
#include "gibbswave/norms.hpp"
#include "internal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gibbswave {

namespace {
constexpr double kPi = std::numbers::pi;
}

TailFit tail_fit(std::vector<double> samples, int min_count, double p_start,
                 int n_bins) {
  if (min_count < 2) throw std::invalid_argument("tail_fit: min_count < 2");
  if (!(p_start > 0.0 && p_start < 1.0))
    throw std::invalid_argument("tail_fit: p_start must lie in (0,1)");
  if (n_bins < 4) throw std::invalid_argument("tail_fit: n_bins < 4");

  TailFit fit;
  fit.n_samples = static_cast<int>(samples.size());
  int n = fit.n_samples;
  if (n < 1000)
    throw std::invalid_argument("tail_fit: need >= 1000 samples");
  if (n < 10 * min_count) return fit;  // inconclusive: not enough tail mass

  std::sort(samples.begin(), samples.end());
  // window in lambda^2: from the (1-p_start) quantile out to the deepest
  // edge still carrying min_count exceedances
  double lam_lo = samples[static_cast<int>((1.0 - p_start) * n)];
  double lam_hi = samples[n - min_count - 1];  // >= min_count exceedances
  if (!(lam_hi > lam_lo) || lam_lo < 0.0) return fit;

  double x_lo = lam_lo * lam_lo, x_hi = lam_hi * lam_hi;
  for (int b = 0; b < n_bins; ++b) {
    double x = x_lo + (x_hi - x_lo) * b / (n_bins - 1);
    double lam = std::sqrt(x);
    auto it = std::upper_bound(samples.begin(), samples.end(), lam);
    int count = static_cast<int>(samples.end() - it);
    if (count < min_count) continue;
    fit.lambdas.push_back(lam);
    fit.log_counts.push_back(std::log(static_cast<double>(count) / n));
  }
  int m = static_cast<int>(fit.lambdas.size());
  if (m < 4) return fit;

  // least squares of log exceedance against lambda^2
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < m; ++i) {
    double x = fit.lambdas[i] * fit.lambdas[i], y = fit.log_counts[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double vxx = sxx - sx * sx / m;
  double vyy = syy - sy * sy / m;
  double vxy = sxy - sx * sy / m;
  if (!(vxx > 0.0)) return fit;
  fit.slope = vxy / vxx;
  fit.intercept = (sy - fit.slope * sx) / m;
  fit.r_squared = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  fit.conclusive = true;
  return fit;
}

namespace {

// Asymptotic Kolmogorov survival function Q(lambda) = P(K > lambda), via the
// fast-converging series on each side of lambda ~ 1.18.
double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    double f = std::exp(-kPi * kPi / (8.0 * lambda * lambda));
    double p = std::sqrt(2.0 * kPi) / lambda *
               (f + std::pow(f, 9) + std::pow(f, 25) + std::pow(f, 49));
    return std::clamp(1.0 - p, 0.0, 1.0);
  }
  double q = 0.0;
  double e = std::exp(-2.0 * lambda * lambda);
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    double term = sign * std::pow(e, j * j);
    q += term;
    if (std::abs(term) < 1e-16 * std::max(q, 1e-300)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

}  // namespace

KSResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("ks_two_sample: need >= 2 points per sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  KSResult r;
  r.n1 = static_cast<int>(a.size());
  r.n2 = static_cast<int>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / r.n1 -
                             static_cast<double>(j) / r.n2));
  }
  r.statistic = d;
  double ne = static_cast<double>(r.n1) * r.n2 / (r.n1 + r.n2);
  double sq = std::sqrt(ne);
  r.p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
  return r;
}

std::vector<std::pair<int, double>> moment_growth(
    const std::vector<std::complex<double>>& coeffs,
    const std::vector<int>& q_list, int n_samples, GaussianStream& g) {
  if (coeffs.empty())
    throw std::invalid_argument("moment_growth: empty coefficient vector");
  if (n_samples < 100)
    throw std::invalid_argument("moment_growth: n_samples must be >= 100");
  double norm2 = 0.0;
  for (const auto& c : coeffs) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > 1e-8)
    throw std::invalid_argument(
        "moment_growth: coefficients must have unit l2 norm");
  for (int q : q_list)
    if (q < 2 || q > 16 || q % 2 != 0)
      throw std::invalid_argument(
          "moment_growth: q must be even and within [2,16]");

  std::vector<double> sums(q_list.size(), 0.0);
  for (int s = 0; s < n_samples; ++s) {
    std::complex<double> x = 0.0;
    for (const auto& c : coeffs) x += c * g.next_complex_gaussian();
    double mag2 = std::norm(x);
    for (std::size_t k = 0; k < q_list.size(); ++k)
      sums[k] += detail::pow_mag2(mag2, static_cast<double>(q_list[k]));
  }
  std::vector<std::pair<int, double>> out;
  out.reserve(q_list.size());
  for (std::size_t k = 0; k < q_list.size(); ++k) {
    int q = q_list[k];
    double mq = sums[k] / n_samples;
    out.emplace_back(q, std::pow(mq, 1.0 / q) / std::sqrt(static_cast<double>(q)));
  }
  return out;
}

namespace {

struct EnsembleObservables {
  std::vector<std::string> names;
  std::vector<std::function<double(const SpectralState&)>> fns;
};

EnsembleObservables make_observables(const GibbsSpec& spec, double s_norm) {
  EnsembleObservables obs;
  obs.names = {"h_norm", "hamiltonian", "mode1_abs", "potential_norm"};
  obs.fns.push_back(
      [s_norm](const SpectralState& u) { return sobolev_norm(u, s_norm); });
  obs.fns.push_back(
      [&spec](const SpectralState& u) { return hamiltonian(u, spec, true); });
  obs.fns.push_back(
      [](const SpectralState& u) { return std::abs(u.coeffs[0]); });
  obs.fns.push_back([&spec](const SpectralState& u) {
    int n = u.n_modes();
    std::vector<double> a(n), grid;
    for (int k = 0; k < n; ++k)
      a[k] = spec.smoothing.multipliers[k] * u.coeffs[k].real();
    double pp = detail::lp_pow_p_real(a.data(), n, *spec.quad,
                                      spec.alpha + 2.0, grid);
    return std::pow(pp, 1.0 / (spec.alpha + 2.0));
  });
  return obs;
}

}  // namespace

InvarianceResult invariance_test(const GibbsSpec& spec, const SimParams& p_sim,
                                 int n_ensemble, double s_norm,
                                 SeededStream stream, int workers,
                                 InitialMeasure measure, bool relax_size) {
  if (n_ensemble < 500 && !relax_size)
    throw std::invalid_argument(
        "invariance_test: n_ensemble must be >= 500 for a calibrated KS test");
  if (n_ensemble < 2)
    throw std::invalid_argument("invariance_test: n_ensemble must be >= 2");
  if (p_sim.n_modes != spec.n_modes)
    throw std::invalid_argument(
        "invariance_test: spec/sim mode count mismatch");

  EnsembleObservables obs = make_observables(spec, s_norm);
  int n_obs = static_cast<int>(obs.fns.size());

  InvarianceResult res;
  res.names = obs.names;
  res.initial.assign(n_obs, std::vector<double>(n_ensemble));
  res.final_vals.assign(n_obs, std::vector<double>(n_ensemble));
  std::vector<std::uint64_t> attempts(n_ensemble, 0);

  detail::parallel_for(n_ensemble, workers, [&](int m) {
    std::uint64_t sid = stream.stream_id + static_cast<std::uint64_t>(m);
    GaussianStream g({stream.seed, sid});
    SpectralState u0;
    if (measure == InitialMeasure::gibbs) {
      GibbsSample s = sample_gibbs(spec, g);
      u0 = std::move(s.state);
      attempts[m] = s.attempts;
    } else {
      u0 = sample_gaussian(spec, g);
      attempts[m] = 1;
    }
    for (int k = 0; k < n_obs; ++k) res.initial[k][m] = obs.fns[k](u0);
    try {
      TrajectoryRecord rec = evolve(u0, p_sim, {});
      for (int k = 0; k < n_obs; ++k)
        res.final_vals[k][m] = obs.fns[k](rec.final_state);
    } catch (const numerical_error& e) {
      throw numerical_error("ensemble member stream_id=" +
                            std::to_string(sid) + ": " + e.what());
    }
  });

  for (int k = 0; k < n_obs; ++k)
    res.tests.push_back(ks_two_sample(res.initial[k], res.final_vals[k]));
  for (auto a : attempts) res.total_attempts += a;
  return res;
}

GrowthRecord growth_tracker(const GibbsSpec& spec, const SimParams& p_sim,
                            int n_ensemble, double s_norm, SeededStream stream,
                            int workers) {
  if (n_ensemble < 1)
    throw std::invalid_argument("growth_tracker: n_ensemble must be >= 1");
  if (p_sim.n_modes != spec.n_modes)
    throw std::invalid_argument("growth_tracker: spec/sim mode count mismatch");

  GrowthRecord rec;
  rec.norms.assign(n_ensemble, {});
  rec.sup_ratio.assign(n_ensemble, 0.0);
  std::vector<std::vector<double>> times(n_ensemble);

  std::vector<Observer> obs{
      {"h_norm", [s_norm](const SpectralState& u, double) {
         return sobolev_norm(u, s_norm);
       }}};

  detail::parallel_for(n_ensemble, workers, [&](int m) {
    std::uint64_t sid = stream.stream_id + static_cast<std::uint64_t>(m);
    GaussianStream g({stream.seed, sid});
    GibbsSample s = sample_gibbs(spec, g);
    TrajectoryRecord tr;
    try {
      tr = evolve(s.state, p_sim, obs);
    } catch (const numerical_error& e) {
      throw numerical_error("ensemble member stream_id=" +
                            std::to_string(sid) + ": " + e.what());
    }
    times[m] = tr.times;
    rec.norms[m] = tr.series[0];
    double sup = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      double env = std::sqrt(1.0 + std::log1p(tr.times[i]));
      sup = std::max(sup, tr.series[0][i] / env);
    }
    rec.sup_ratio[m] = sup;
  });

  rec.times = times[0];
  std::vector<double> sorted = rec.sup_ratio;
  std::sort(sorted.begin(), sorted.end());
  rec.max_ratio = sorted.back();
  int n = n_ensemble;
  rec.median_ratio = (n % 2 == 1)
                         ? sorted[n / 2]
                         : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return rec;
}

double strichartz_ratio(int n_trials, int n_modes, double p,
                        SeededStream stream,
                        std::shared_ptr<const RadialQuadrature> quad,
                        int t_nodes) {
  if (!(p > 4.0 && p < 6.0))
    throw std::invalid_argument("strichartz_ratio: p must lie in (4,6)");
  if (n_trials < 1)
    throw std::invalid_argument("strichartz_ratio: n_trials must be >= 1");
  if (!quad) quad = std::make_shared<RadialQuadrature>(build_basis(n_modes));
  if (quad->n_max < n_modes)
    throw std::invalid_argument(
        "strichartz_ratio: quadrature covers fewer modes than n_modes");

  double sigma = 1.5 - 4.0 / p;
  detail::SpacetimeTable table = detail::make_spacetime_table(n_modes, t_nodes);
  GaussianStream g(stream);
  std::vector<double> re_grid, im_grid, re_c, im_c;
  double sup = 0.0;
  SpectralState u;
  u.coeffs.resize(n_modes);
  for (int trial = 0; trial < n_trials; ++trial) {
    double h2 = 0.0;
    for (int k = 1; k <= n_modes; ++k) {
      double w = std::pow(kPi * k, sigma);
      std::complex<double> c = g.next_complex_gaussian() / w;
      u.coeffs[k - 1] = c;
      h2 += w * w * std::norm(c);
    }
    double scale = 1.0 / std::sqrt(h2);
    for (auto& c : u.coeffs) c *= scale;
    double pp = detail::spacetime_lp_pow_p(u, *quad, p, table, re_grid,
                                           im_grid, re_c, im_c);
    sup = std::max(sup, std::pow(pp, 1.0 / p));
  }
  return sup;
}

}  // namespace gibbswave
