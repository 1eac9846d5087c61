#pragma once

#include "gibbswave/dynamics.hpp"
#include "gibbswave/rng.hpp"
#include "gibbswave/sampling.hpp"

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace gibbswave {

// Least-squares fit of log P(X > lambda) against lambda^2 over bins spaced
// evenly in lambda^2 between the (1 - p_start) sample quantile and the
// deepest lambda with >= min_count exceedances.  A sub-Gaussian tail
// P <= C exp(-c lambda^2) shows up as slope = -c < 0.
struct TailFit {
  std::vector<double> lambdas;     // admissible bin edges
  std::vector<double> log_counts;  // log empirical exceedance at each edge
  double slope = 0;
  double intercept = 0;  // log C
  double r_squared = 0;
  int n_samples = 0;
  bool conclusive = false;  // false when < 4 admissible bins or no spread
};

TailFit tail_fit(std::vector<double> samples, int min_count = 30,
                 double p_start = 0.02, int n_bins = 16);

struct KSResult {
  double statistic = 0;  // sup-distance of empirical CDFs, in [0,1]
  double p_value = 1;    // asymptotic, monotone decreasing in the statistic
  int n1 = 0, n2 = 0;
};

KSResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Monte Carlo E|X|^q for X = sum c_n g_n, g_n iid complex standard
// Gaussians (E|g|^2 = 2), reported as (q, M_q^{1/q}/sqrt(q)).  Requires
// sum |c_n|^2 = 1 and even q in [2, 16].
std::vector<std::pair<int, double>> moment_growth(
    const std::vector<std::complex<double>>& coeffs,
    const std::vector<int>& q_list, int n_samples, GaussianStream& g);

enum class InitialMeasure { gibbs, gaussian };

struct InvarianceResult {
  std::vector<std::string> names;
  std::vector<KSResult> tests;                  // one per observable
  std::vector<std::vector<double>> initial;     // [observable][member]
  std::vector<std::vector<double>> final_vals;  // [observable][member]
  std::uint64_t total_attempts = 0;             // rejection proposals consumed
};

// Draws n_ensemble states from rho_N (stream_id = member index), evolves
// each to p_sim.t_final, and KS-compares the t = 0 and t = t_final
// populations of each observable: H^s norm, truncated Hamiltonian, |c_1|,
// ||S_N Re u||_{L^{alpha+2}}.  measure = gaussian runs the negative control
// (mu_N initial data, not invariant).  Requires n_ensemble >= 500 unless
// relax_size (unit tests use small ensembles).
InvarianceResult invariance_test(const GibbsSpec& spec, const SimParams& p_sim,
                                 int n_ensemble, double s_norm,
                                 SeededStream stream, int workers = 0,
                                 InitialMeasure measure = InitialMeasure::gibbs,
                                 bool relax_size = false);

struct GrowthRecord {
  std::vector<double> times;
  std::vector<std::vector<double>> norms;  // [member][time] H^s norm
  std::vector<double> sup_ratio;           // per member: sup_t norm/envelope
  double max_ratio = 0;
  double median_ratio = 0;
};

// Long-horizon envelope check: ratio(t) = ||u(t)||_{H^s} / (1+log(1+t))^{1/2}
// per trajectory (Gibbs initial data), with ensemble max and median of the
// sup over record times.
GrowthRecord growth_tracker(const GibbsSpec& spec, const SimParams& p_sim,
                            int n_ensemble, double s_norm, SeededStream stream,
                            int workers = 0);

// Empirical sup over n_trials random unit-H^sigma states in E_N of
// ||S(t)f||_{L^p([-1,1] x ball)} / ||f||_{H^sigma}, sigma = 3/2 - 4/p.
// The time norm is computed over (0,2) (equal by 2-periodicity).  Requires
// p in (4,6).  A prebuilt quadrature covering n_modes may be shared.
double strichartz_ratio(int n_trials, int n_modes, double p,
                        SeededStream stream,
                        std::shared_ptr<const RadialQuadrature> quad = nullptr,
                        int t_nodes = 64);

}  // namespace gibbswave
