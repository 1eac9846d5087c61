#include "gibbswave/dynamics.hpp"

#include "gibbswave/config.hpp"
#include "internal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gibbswave {

namespace {

constexpr double kPi = std::numbers::pi;

// Force coefficients of the shear field: out[k-1] = m_k <F(S a), e_k>/(pi k)
// where a is the real part of c and S multiplies by mult (identity when mult
// is null).  Scratch vectors are caller-owned so step loops stay
// allocation-free.
void force_coeffs(const std::vector<std::complex<double>>& c,
                  const RadialQuadrature& quad, const double* mult,
                  double alpha, std::vector<double>& a,
                  std::vector<double>& grid, std::vector<double>& out) {
  int n = static_cast<int>(c.size());
  int q = quad.n_quad();
  a.resize(n);
  out.resize(n);
  for (int k = 0; k < n; ++k)
    a[k] = (mult ? mult[k] : 1.0) * c[k].real();
  grid.assign(q, 0.0);
  for (int k = 1; k <= n; ++k) {
    double ak = a[k - 1];
    if (ak == 0.0) continue;
    const double* row = quad.mode(k);
    for (int j = 0; j < q; ++j) grid[j] += ak * row[j];
  }
  for (int j = 0; j < q; ++j)
    grid[j] = quad.weights[j] * nonlinearity(grid[j], alpha);
  for (int k = 1; k <= n; ++k) {
    double mk = mult ? mult[k - 1] : 1.0;
    if (mk == 0.0) {
      out[k - 1] = 0.0;
      continue;
    }
    const double* row = quad.mode(k);
    double dot = 0.0;
    for (int j = 0; j < q; ++j) dot += grid[j] * row[j];
    out[k - 1] = mk * dot / (kPi * k);
  }
}

struct FlowWorkspace {
  std::vector<double> a, grid, force;
  std::vector<double> rot_cos, rot_sin;
  double rot_dt = 0;  // dt the rotation tables were built for

  void prepare_rotation(int n, double dt) {
    if (rot_dt == dt && static_cast<int>(rot_cos.size()) == n) return;
    rot_cos.resize(n);
    rot_sin.resize(n);
    for (int k = 1; k <= n; ++k) {
      double th = kPi * std::fmod(k * dt, 2.0);
      rot_cos[k - 1] = std::cos(th);
      rot_sin[k - 1] = std::sin(th);
    }
    rot_dt = dt;
  }
};

void shear(std::vector<std::complex<double>>& c, double h,
           const SimParams& p, FlowWorkspace& w) {
  force_coeffs(c, *p.quad, p.smoothing.multipliers.data(), p.alpha, w.a,
               w.grid, w.force);
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] = {c[k].real(), c[k].imag() - h * w.force[k]};
}

// c_k <- exp(-i pi k dt) c_k with the precomputed angle tables.
void rotate(std::vector<std::complex<double>>& c, const FlowWorkspace& w) {
  for (std::size_t k = 0; k < c.size(); ++k) {
    double re = c[k].real(), im = c[k].imag();
    double co = w.rot_cos[k], si = w.rot_sin[k];
    c[k] = {re * co + im * si, im * co - re * si};
  }
}

void strang_step(std::vector<std::complex<double>>& c, double dt,
                 const SimParams& p, FlowWorkspace& w) {
  w.prepare_rotation(static_cast<int>(c.size()), dt);
  if (p.nonlinear) shear(c, 0.5 * dt, p, w);
  rotate(c, w);
  if (p.nonlinear) shear(c, 0.5 * dt, p, w);
}

void check_params(const SpectralState& u0, const SimParams& p) {
  if (!p.quad) throw std::invalid_argument("flow: quadrature is null");
  if (p.n_modes < 1 || u0.n_modes() != p.n_modes)
    throw std::invalid_argument("flow: state has " +
                                std::to_string(u0.n_modes()) +
                                " modes, params expect " +
                                std::to_string(p.n_modes));
  if (p.quad->n_max < p.n_modes)
    throw std::invalid_argument("flow: quadrature covers fewer modes than n_modes");
  if (p.dt == 0.0) throw std::invalid_argument("flow: dt must be nonzero");
  if (static_cast<int>(p.smoothing.multipliers.size()) < p.n_modes)
    throw std::invalid_argument("flow: smoothing profile too short");
}

}  // namespace

SimParams make_sim_params(double alpha, int n_modes, double dt, double t_final,
                          int record_every,
                          std::shared_ptr<const RadialQuadrature> quad) {
  if (!(alpha > 0.0 && alpha < 3.0))
    throw std::invalid_argument("make_sim_params: alpha must lie in (0,3)");
  if (n_modes < 1)
    throw std::invalid_argument("make_sim_params: n_modes must be >= 1");
  if (t_final < 0.0)
    throw std::invalid_argument("make_sim_params: t_final must be >= 0");
  if (record_every < 1)
    throw std::invalid_argument("make_sim_params: record_every must be >= 1");
  SimParams p;
  p.alpha = alpha;
  p.n_modes = n_modes;
  p.t_final = t_final;
  p.record_every = record_every;
  p.quad = quad ? std::move(quad)
                : std::shared_ptr<const RadialQuadrature>(
                      std::make_shared<RadialQuadrature>(build_basis(n_modes)));
  if (p.quad->n_max < n_modes)
    throw std::invalid_argument(
        "make_sim_params: quadrature covers fewer modes than n_modes");
  p.dt = dt != 0.0 ? dt : 1e-3 * std::min(1.0, 64.0 / n_modes);
  p.smoothing = make_smoothing(n_modes, p.quad->n_max);
  return p;
}

double nonlinearity(double x, double alpha) {
  if (x == 0.0) return 0.0;
  return x * detail::pow_mag2(x * x, alpha);
}

double hamiltonian(const SpectralState& u, const GibbsSpec& spec,
                   bool truncated) {
  int n = u.n_modes();
  if (n > spec.quad->n_max)
    throw std::invalid_argument(
        "hamiltonian: quadrature does not cover the state's modes");
  double kin = 0.0;
  for (int k = 1; k <= n; ++k) {
    double w = kPi * k;
    kin += 0.5 * w * w * std::norm(u.coeffs[k - 1]);
  }
  std::vector<double> a(n);
  for (int k = 0; k < n; ++k) {
    double mk = truncated ? spec.smoothing.multipliers[k] : 1.0;
    a[k] = mk * u.coeffs[k].real();
  }
  std::vector<double> grid;
  double pot =
      detail::lp_pow_p_real(a.data(), n, *spec.quad, spec.alpha + 2.0, grid);
  return kin + pot / (spec.alpha + 2.0);
}

SpectralState flow_step(const SpectralState& u, const SimParams& p) {
  check_params(u, p);
  FlowWorkspace w;
  SpectralState v = u;
  strang_step(v.coeffs, p.dt, p, w);
  return v;
}

TrajectoryRecord evolve(const SpectralState& u0, const SimParams& p,
                        const std::vector<Observer>& observers) {
  check_params(u0, p);
  if (p.t_final < 0.0)
    throw std::invalid_argument("evolve: t_final must be >= 0");
  if (p.record_every < 1)
    throw std::invalid_argument("evolve: record_every must be >= 1");

  double adt = std::abs(p.dt);
  long long n_full = 0;
  double rem = 0.0;
  if (p.t_final > 0.0) {
    double ratio = p.t_final / adt;
    n_full = std::llround(ratio);
    if (n_full < 1 ||
        std::abs(n_full * adt - p.t_final) > 1e-9 * std::max(1.0, p.t_final)) {
      n_full = static_cast<long long>(std::floor(ratio));
      rem = p.t_final - n_full * adt;
      if (rem <= 1e-12 * std::max(adt, 1.0)) rem = 0.0;
    }
  }
  long long total = n_full + (rem > 0.0 ? 1 : 0);

  TrajectoryRecord rec;
  rec.steps = static_cast<std::uint64_t>(total);
  rec.observable_names.reserve(observers.size());
  for (const auto& o : observers) rec.observable_names.push_back(o.name);
  rec.series.assign(observers.size(), {});

  SpectralState u = u0;
  FlowWorkspace w;
  double sign = p.dt > 0.0 ? 1.0 : -1.0;

  auto record = [&](double t) {
    rec.times.push_back(t);
    for (std::size_t k = 0; k < observers.size(); ++k)
      rec.series[k].push_back(observers[k].fn(u, t));
  };
  auto check_finite = [&](long long step, double t) {
    for (const auto& c : u.coeffs)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw numerical_error(
            "evolve: state went nonfinite at step " + std::to_string(step) +
            " (t = " + std::to_string(t) +
            "); dt is likely too large for this n_modes/alpha");
  };

  record(0.0);
  for (long long k = 1; k <= n_full; ++k) {
    strang_step(u.coeffs, p.dt, p, w);
    double t = k * adt;
    check_finite(k, t);
    if (k % p.record_every == 0 || (k == total && rem == 0.0)) record(t);
  }
  if (rem > 0.0) {
    strang_step(u.coeffs, sign * rem, p, w);
    check_finite(total, p.t_final);
    record(p.t_final);
  } else if (total == 0) {
    // t_final == 0: the initial record is also the final one
  }
  // drop a duplicate when n_full % record_every == 0 already recorded final
  if (rec.times.size() >= 2 &&
      rec.times[rec.times.size() - 1] == rec.times[rec.times.size() - 2]) {
    rec.times.pop_back();
    for (auto& s : rec.series) s.pop_back();
  }
  rec.final_state = std::move(u);
  return rec;
}

namespace {

// Solves the 8x8 system M x = b in place (partial pivoting); M row-major.
void solve8(double M[8][8], double b[8]) {
  for (int col = 0; col < 8; ++col) {
    int best = col;
    for (int r = col + 1; r < 8; ++r)
      if (std::abs(M[r][col]) > std::abs(M[best][col])) best = r;
    if (best != col) {
      for (int c = 0; c < 8; ++c) std::swap(M[col][c], M[best][c]);
      std::swap(b[col], b[best]);
    }
    double d = M[col][col];
    for (int r = col + 1; r < 8; ++r) {
      double f = M[r][col] / d;
      if (f == 0.0) continue;
      for (int c = col; c < 8; ++c) M[r][c] -= f * M[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = 7; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 8; ++c) s -= M[r][c] * b[c];
    b[r] = s / M[r][r];
  }
}

}  // namespace

SpectralState picard_duhamel(const SpectralState& u0, const GibbsSpec& spec,
                             double T, double tol, int max_iter,
                             bool truncated) {
  if (T < 0.0)
    throw std::invalid_argument("picard_duhamel: T must be >= 0");
  if (u0.n_modes() != spec.n_modes)
    throw std::invalid_argument(
        "picard_duhamel: state/spec mode count mismatch");
  if (tol <= 0.0)
    throw std::invalid_argument("picard_duhamel: tol must be > 0");
  if (T == 0.0) return u0;

  const RadialQuadrature& quad = *spec.quad;
  const double* mult = truncated ? spec.smoothing.multipliers.data() : nullptr;
  const int n = spec.n_modes;
  const double inner_tol = std::max(tol / 100.0, 1e-14);

  // 8-node collocation: B[i][j] integrates the Lagrange interpolant on the
  // unit-interval nodes from 0 to x_i; exact for degree <= 7.
  std::vector<double> gx, gw;
  gauss_legendre(8, 0.0, 1.0, gx, gw);
  double B[8][8];
  for (int i = 0; i < 8; ++i) {
    double M[8][8], b[8];
    for (int m = 0; m < 8; ++m) {
      for (int j = 0; j < 8; ++j) M[m][j] = std::pow(gx[j], m);
      b[m] = std::pow(gx[i], m + 1) / (m + 1);
    }
    solve8(M, b);
    for (int j = 0; j < 8; ++j) B[i][j] = b[j];
  }

  auto hs_diff = [&](const std::vector<std::complex<double>>& x,
                     const std::vector<std::complex<double>>& y) {
    double acc = 0.0;
    for (int k = 1; k <= n; ++k)
      acc += std::pow(kPi * k, 0.8) * std::norm(x[k - 1] - y[k - 1]);
    return std::sqrt(acc);
  };

  std::vector<double> a, grid, force;

  auto run = [&](int panels) {
    std::vector<std::complex<double>> v_a = u0.coeffs;  // interaction picture
    double h = T / panels;
    std::vector<std::vector<std::complex<double>>> v(
        8, std::vector<std::complex<double>>(n));
    std::vector<std::vector<std::complex<double>>> psi(
        8, std::vector<std::complex<double>>(n));
    std::vector<std::complex<double>> u_node(n), v_new(n);
    std::vector<double> co(8 * n), si(8 * n);

    for (int panel = 0; panel < panels; ++panel) {
      double t0 = panel * h;
      for (int j = 0; j < 8; ++j) {
        double tau = t0 + h * gx[j];
        for (int k = 1; k <= n; ++k) {
          double th = kPi * std::fmod(k * tau, 2.0);
          co[j * n + k - 1] = std::cos(th);
          si[j * n + k - 1] = std::sin(th);
        }
        v[j] = v_a;
      }
      bool converged = false;
      for (int it = 0; it < max_iter && !converged; ++it) {
        // psi_j = S(-tau_j) G(S(tau_j) v_j); G has real coefficients
        for (int j = 0; j < 8; ++j) {
          const double* cj = co.data() + j * n;
          const double* sj = si.data() + j * n;
          for (int k = 0; k < n; ++k) {
            double re = v[j][k].real(), im = v[j][k].imag();
            u_node[k] = {re * cj[k] + im * sj[k], im * cj[k] - re * sj[k]};
          }
          force_coeffs(u_node, quad, mult, spec.alpha, a, grid, force);
          for (int k = 0; k < n; ++k)
            psi[j][k] = {force[k] * cj[k], force[k] * sj[k]};
        }
        double delta = 0.0;
        for (int i = 0; i < 8; ++i) {
          for (int k = 0; k < n; ++k) {
            std::complex<double> acc = 0.0;
            for (int j = 0; j < 8; ++j) acc += B[i][j] * psi[j][k];
            // v_i = v_a - i h * acc
            v_new[k] = v_a[k] + h * std::complex<double>(acc.imag(), -acc.real());
          }
          delta = std::max(delta, hs_diff(v_new, v[i]));
          v[i] = v_new;
        }
        if (delta <= inner_tol) converged = true;
      }
      if (!converged)
        throw numerical_error(
            "picard_duhamel: fixed-point iteration did not contract within " +
            std::to_string(max_iter) +
            " sweeps (T beyond the contraction regime, or tol too tight)");
      // panel endpoint via the full-weight quadrature of the converged psi
      for (int j = 0; j < 8; ++j) {
        const double* cj = co.data() + j * n;
        const double* sj = si.data() + j * n;
        for (int k = 0; k < n; ++k) {
          double re = v[j][k].real(), im = v[j][k].imag();
          u_node[k] = {re * cj[k] + im * sj[k], im * cj[k] - re * sj[k]};
        }
        force_coeffs(u_node, quad, mult, spec.alpha, a, grid, force);
        for (int k = 0; k < n; ++k)
          psi[j][k] = {force[k] * cj[k], force[k] * sj[k]};
      }
      for (int k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < 8; ++j) acc += gw[j] * psi[j][k];
        v_a[k] += h * std::complex<double>(acc.imag(), -acc.real());
      }
    }
    // back to the lab frame: u(T) = S(T) v(T)
    SpectralState out;
    out.coeffs.resize(n);
    for (int k = 1; k <= n; ++k) {
      double th = kPi * std::fmod(k * T, 2.0);
      double cT = std::cos(th), sT = std::sin(th);
      double re = v_a[k - 1].real(), im = v_a[k - 1].imag();
      out.coeffs[k - 1] = {re * cT + im * sT, im * cT - re * sT};
    }
    return out;
  };

  int panels = std::max(1, static_cast<int>(std::ceil(T / 0.1 - 1e-12)));
  SpectralState prev = run(panels);
  for (int d = 0; d < 12; ++d) {
    panels *= 2;
    SpectralState cur = run(panels);
    if (hs_diff(cur.coeffs, prev.coeffs) <= tol) return cur;
    prev = std::move(cur);
  }
  throw numerical_error(
      "picard_duhamel: panel refinement did not converge to tol");
}

}  // namespace gibbswave
