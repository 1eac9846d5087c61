#include "gibbswave/norms.hpp"

#include "internal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gibbswave {

namespace {
constexpr double kPi = std::numbers::pi;
}

namespace detail {

double pow_mag2(double mag2, double p) {
  int ip = static_cast<int>(p);
  if (p == ip && ip >= 0 && ip <= 16) {
    // |x|^p = (x^2)^{p/2}; odd p needs one sqrt
    double base = mag2, r = 1.0;
    int e = ip / 2;
    while (e) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    if (ip & 1) r *= std::sqrt(mag2);
    return r;
  }
  return std::pow(mag2, 0.5 * p);
}

double lp_pow_p_real(const double* a, int n, const RadialQuadrature& quad,
                     double p, std::vector<double>& grid) {
  int q = quad.n_quad();
  grid.assign(q, 0.0);
  for (int k = 1; k <= n; ++k) {
    double ak = a[k - 1];
    if (ak == 0.0) continue;
    const double* row = quad.mode(k);
    for (int j = 0; j < q; ++j) grid[j] += ak * row[j];
  }
  double acc = 0.0;
  for (int j = 0; j < q; ++j)
    acc += quad.weights[j] * pow_mag2(grid[j] * grid[j], p);
  return acc;
}

SpacetimeTable make_spacetime_table(int n_modes, int t_nodes) {
  if (t_nodes < 16)
    throw std::invalid_argument("spacetime table: t_nodes must be >= 16");
  SpacetimeTable tab;
  tab.n_modes = n_modes;
  // composite 4-point Gauss-Legendre over t_nodes panels of (0,2)
  std::vector<double> base_x, base_w;
  gauss_legendre(4, 0.0, 1.0, base_x, base_w);
  double width = 2.0 / t_nodes;
  tab.n_times = 4 * t_nodes;
  tab.t_weights.resize(tab.n_times);
  tab.cos_nt.resize(static_cast<std::size_t>(tab.n_times) * n_modes);
  tab.sin_nt.resize(static_cast<std::size_t>(tab.n_times) * n_modes);
  for (int panel = 0; panel < t_nodes; ++panel) {
    for (int g = 0; g < 4; ++g) {
      int k = 4 * panel + g;
      double t = (panel + base_x[g]) * width;
      tab.t_weights[k] = base_w[g] * width;
      for (int n = 1; n <= n_modes; ++n) {
        double th = kPi * std::fmod(n * t, 2.0);
        tab.cos_nt[static_cast<std::size_t>(k) * n_modes + n - 1] = std::cos(th);
        tab.sin_nt[static_cast<std::size_t>(k) * n_modes + n - 1] = std::sin(th);
      }
    }
  }
  return tab;
}

double spacetime_lp_pow_p(const SpectralState& u0, const RadialQuadrature& quad,
                          double p, const SpacetimeTable& table,
                          std::vector<double>& re_grid,
                          std::vector<double>& im_grid,
                          std::vector<double>& re_c, std::vector<double>& im_c) {
  int n = u0.n_modes();
  int q = quad.n_quad();
  re_c.resize(n);
  im_c.resize(n);
  double acc = 0.0;
  for (int k = 0; k < table.n_times; ++k) {
    const double* ct = table.cos_nt.data() +
                       static_cast<std::size_t>(k) * table.n_modes;
    const double* st = table.sin_nt.data() +
                       static_cast<std::size_t>(k) * table.n_modes;
    for (int m = 0; m < n; ++m) {
      double re = u0.coeffs[m].real(), im = u0.coeffs[m].imag();
      re_c[m] = re * ct[m] + im * st[m];
      im_c[m] = im * ct[m] - re * st[m];
    }
    re_grid.assign(q, 0.0);
    im_grid.assign(q, 0.0);
    for (int m = 0; m < n; ++m) {
      const double* row = quad.mode(m + 1);
      double rc = re_c[m], ic = im_c[m];
      for (int j = 0; j < q; ++j) {
        re_grid[j] += rc * row[j];
        im_grid[j] += ic * row[j];
      }
    }
    double space = 0.0;
    for (int j = 0; j < q; ++j) {
      double mag2 = re_grid[j] * re_grid[j] + im_grid[j] * im_grid[j];
      space += quad.weights[j] * pow_mag2(mag2, p);
    }
    acc += table.t_weights[k] * space;
  }
  return acc;
}

}  // namespace detail

double pow_abs(double x, double p) { return detail::pow_mag2(x * x, p); }

double lp_norm_ball(const SpectralState& u, const RadialQuadrature& quad,
                    double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm_ball: p must be >= 1");
  if (u.n_modes() > quad.n_max)
    throw std::invalid_argument(
        "lp_norm_ball: quadrature does not cover the state's modes");
  int q = quad.n_quad();
  int n = u.n_modes();
  bool real_only = true;
  for (const auto& c : u.coeffs)
    if (c.imag() != 0.0) {
      real_only = false;
      break;
    }
  std::vector<double> grid;
  double acc = 0.0;
  if (real_only) {
    std::vector<double> a(n);
    for (int k = 0; k < n; ++k) a[k] = u.coeffs[k].real();
    acc = detail::lp_pow_p_real(a.data(), n, quad, p, grid);
  } else {
    std::vector<double> re_grid(q, 0.0), im_grid(q, 0.0);
    for (int k = 1; k <= n; ++k) {
      const double* row = quad.mode(k);
      double rc = u.coeffs[k - 1].real(), ic = u.coeffs[k - 1].imag();
      for (int j = 0; j < q; ++j) {
        re_grid[j] += rc * row[j];
        im_grid[j] += ic * row[j];
      }
    }
    for (int j = 0; j < q; ++j) {
      double mag2 = re_grid[j] * re_grid[j] + im_grid[j] * im_grid[j];
      acc += quad.weights[j] * detail::pow_mag2(mag2, p);
    }
  }
  return std::pow(acc, 1.0 / p);
}

double spacetime_lp_norm(const SpectralState& u0, const RadialQuadrature& quad,
                         double p, int t_nodes) {
  if (p < 2.0 || p >= 6.0)
    throw std::invalid_argument("spacetime_lp_norm: p must lie in [2,6)");
  if (u0.n_modes() > quad.n_max)
    throw std::invalid_argument(
        "spacetime_lp_norm: quadrature does not cover the state's modes");
  auto table = detail::make_spacetime_table(u0.n_modes(), t_nodes);
  std::vector<double> re_grid, im_grid, re_c, im_c;
  double acc = detail::spacetime_lp_pow_p(u0, quad, p, table, re_grid, im_grid,
                                          re_c, im_c);
  return std::pow(acc, 1.0 / p);
}

}  // namespace gibbswave
