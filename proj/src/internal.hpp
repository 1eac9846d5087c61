#pragma once

#include "gibbswave/basis.hpp"
#include "gibbswave/state.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace gibbswave::detail {

// Static-striding worker pool: index i goes to worker i % workers, results
// land in caller-owned slots, so output never depends on scheduling.
// workers <= 1 runs inline.  The lowest-index captured exception is
// rethrown after the join.
void parallel_for(int n, int workers, const std::function<void(int)>& body);

int resolve_workers(int workers);  // 0 -> hardware concurrency

// sum_j w_j |field(r_j)|^p for the real field sum_n a_n e_n; a has quad-
// covered length.  This is the p-th POWER (the Hamiltonian/Gibbs call sites
// need the power, not the norm).
double lp_pow_p_real(const double* a, int n, const RadialQuadrature& quad,
                     double p, std::vector<double>& grid);

// |x|^p routed through x^2 to skip sqrt for even powers.
double pow_mag2(double mag2, double p);

// Precomputed rotation phases for the space-time norm's time grid: shared
// across the many states of an ensemble sweep.
struct SpacetimeTable {
  std::vector<double> t_weights;        // per time node
  std::vector<double> cos_nt, sin_nt;   // [time][mode], row-major
  int n_modes = 0;
  int n_times = 0;
};

SpacetimeTable make_spacetime_table(int n_modes, int t_nodes);

// ||S(t)u0||^p_{L^p((0,2) x ball)} raised to the p-th power, using a shared
// table; scratch buffers are caller-provided to keep ensemble loops
// allocation-free.
double spacetime_lp_pow_p(const SpectralState& u0, const RadialQuadrature& quad,
                          double p, const SpacetimeTable& table,
                          std::vector<double>& re_grid,
                          std::vector<double>& im_grid,
                          std::vector<double>& re_c, std::vector<double>& im_c);

// 17-significant-digit float formatting for byte-reproducible CSV output.
std::string fmt17(double x);

// RFC 4180: header row, CRLF line endings, quoting only where required.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

std::string iso8601_utc_now();

}  // namespace gibbswave::detail
