#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gibbswave/basis.hpp"
#include "gibbswave/norms.hpp"
#include "gibbswave/rng.hpp"
#include "gibbswave/smoothing.hpp"
#include "gibbswave/state.hpp"

using namespace gibbswave;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralState random_state(int n_modes, std::uint64_t seed) {
  GaussianStream g({seed, 7});
  SpectralState u = SpectralState::zero(n_modes);
  for (auto& c : u.coeffs) c = g.next_complex_gaussian();
  return u;
}

}  // namespace

TEST_CASE("sobolev_norm reproduces a hand value") {
  SpectralState u = SpectralState::zero(1);
  u.coeffs[0] = {3.0, 4.0};
  // (pi)^{2*0.5} |3+4i|^2 = 25 pi  ->  norm = 5 sqrt(pi)
  CHECK(sobolev_norm(u, 0.5) == doctest::Approx(8.862269254527580).epsilon(1e-14));
  CHECK(sobolev_norm(u, 0.0) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("free evolution is 2-periodic to the bit") {
  SpectralState u = random_state(64, 11);
  SpectralState v = free_evolve(u, 2.0);
  for (int n = 0; n < 64; ++n) {
    CHECK(v.coeffs[n].real() == u.coeffs[n].real());
    CHECK(v.coeffs[n].imag() == u.coeffs[n].imag());
  }
  // ... and at a large even time, where naive phase accumulation would have
  // lost digits long ago.
  SpectralState w = free_evolve(u, 2.0e6);
  for (int n = 0; n < 64; ++n) {
    CHECK(w.coeffs[n].real() == u.coeffs[n].real());
    CHECK(w.coeffs[n].imag() == u.coeffs[n].imag());
  }
}

TEST_CASE("free evolution is an isometry of every Sobolev norm") {
  SpectralState u = random_state(64, 12);
  for (double s : {0.0, 0.4, 1.0}) {
    const double before = sobolev_norm(u, s);
    for (double t : {0.1, 0.73, 5.31, 1999.9}) {
      CHECK(std::abs(sobolev_norm(free_evolve(u, t), s) - before) <=
            1e-13 * before);
    }
  }
}

TEST_CASE("free evolution composes and inverts") {
  SpectralState u = random_state(16, 13);
  SpectralState back = free_evolve(free_evolve(u, 0.37), -0.37);
  for (int n = 0; n < 16; ++n)
    CHECK(std::abs(back.coeffs[n] - u.coeffs[n]) <= 1e-14);
}

TEST_CASE("free evolution phase: quarter period sends c_1 to -i c_1") {
  SpectralState u = SpectralState::zero(1);
  u.coeffs[0] = 1.0;
  SpectralState v = free_evolve(u, 0.5);
  CHECK(std::abs(v.coeffs[0].real()) <= 1e-15);
  CHECK(v.coeffs[0].imag() == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("pair <-> complex uses c_n = w_n + i wt_n/(pi n)") {
  FieldPair f;
  f.w_coeffs = {1.0, 2.0};
  f.wt_coeffs = {3.0, -4.0};
  SpectralState u = pair_to_complex(f);
  CHECK(u.coeffs[0].real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(u.coeffs[0].imag() == doctest::Approx(3.0 / kPi).epsilon(1e-15));
  CHECK(u.coeffs[1].real() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(u.coeffs[1].imag() == doctest::Approx(-4.0 / (2.0 * kPi)).epsilon(1e-15));

  FieldPair g = complex_to_pair(u);
  for (int n = 0; n < 2; ++n) {
    CHECK(g.w_coeffs[n] == doctest::Approx(f.w_coeffs[n]).epsilon(1e-14));
    CHECK(g.wt_coeffs[n] == doctest::Approx(f.wt_coeffs[n]).epsilon(1e-14));
  }

  FieldPair bad;
  bad.w_coeffs = {1.0, 2.0};
  bad.wt_coeffs = {1.0};
  CHECK_THROWS_AS(pair_to_complex(bad), std::invalid_argument);
}

TEST_CASE("smooth_cutoff is a symmetric C-infinity step") {
  CHECK(smooth_cutoff(0.0) == 1.0);
  CHECK(smooth_cutoff(0.5) == 1.0);
  CHECK(smooth_cutoff(1.0) == 0.0);
  CHECK(smooth_cutoff(2.0) == 0.0);
  CHECK(smooth_cutoff(-0.3) == smooth_cutoff(0.3));
  // Partition-of-unity symmetry: chi(x) + chi(3/2 - x) = 1 on the ramp.
  for (double x : {0.55, 0.6, 0.75, 0.9}) {
    CHECK(smooth_cutoff(x) + smooth_cutoff(1.5 - x) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(smooth_cutoff(x) > 0.0);
    CHECK(smooth_cutoff(x) < 1.0);
  }
}

TEST_CASE("make_smoothing: identity below N/sqrt(2), zero from N, monotone") {
  SmoothingProfile s = make_smoothing(8, 16);
  REQUIRE(s.multipliers.size() == 16);
  CHECK(s.n_cut == 8);
  // n^2/64 <= 1/2  <=>  n <= 5 for integer n.
  for (int n = 1; n <= 5; ++n) CHECK(s.multipliers[n - 1] == 1.0);
  for (int n = 8; n <= 16; ++n) CHECK(s.multipliers[n - 1] == 0.0);
  for (int n = 6; n <= 7; ++n) {
    CHECK(s.multipliers[n - 1] > 0.0);
    CHECK(s.multipliers[n - 1] < 1.0);
  }
  for (int n = 2; n <= 16; ++n)
    CHECK(s.multipliers[n - 1] <= s.multipliers[n - 2]);
}

TEST_CASE("apply_smoothing scales coefficients and checks coverage") {
  SmoothingProfile s = make_smoothing(8, 8);
  SpectralState u = random_state(8, 14);
  SpectralState v = apply_smoothing(u, s);
  for (int n = 1; n <= 8; ++n) {
    CHECK(v.coeffs[n - 1].real() == s.multipliers[n - 1] * u.coeffs[n - 1].real());
    CHECK(v.coeffs[n - 1].imag() == s.multipliers[n - 1] * u.coeffs[n - 1].imag());
  }
  SpectralState w = random_state(9, 14);
  CHECK_THROWS_AS(apply_smoothing(w, s), std::invalid_argument);
}

TEST_CASE("lp_norm_ball at p=2 agrees with Parseval") {
  RadialQuadrature quad = build_basis(16);
  SpectralState u = random_state(16, 15);
  CHECK(lp_norm_ball(u, quad, 2.0) ==
        doctest::Approx(sobolev_norm(u, 0.0)).epsilon(1e-12));
}

TEST_CASE("lp_norm_ball matches closed-form values for the first mode") {
  RadialQuadrature quad = build_basis(8);
  SpectralState u = SpectralState::zero(1);
  u.coeffs[0] = 1.0;
  // int_ball |e_1|^4 and the L^5 norm, evaluated independently to 16 digits
  // from the 1-d radial integrals.
  const double l4 = lp_norm_ball(u, quad, 4.0);
  CHECK(l4 * l4 * l4 * l4 == doctest::Approx(0.6720709633403985).epsilon(1e-12));
  CHECK(lp_norm_ball(u, quad, 5.0) ==
        doctest::Approx(0.9107163362098524).epsilon(1e-12));
}

TEST_CASE("lp_norm_ball is homogeneous and validates its arguments") {
  RadialQuadrature quad = build_basis(8);
  SpectralState u = random_state(8, 16);
  const double base = lp_norm_ball(u, quad, 3.0);
  SpectralState two = u;
  for (auto& c : two.coeffs) c *= 2.0;
  CHECK(lp_norm_ball(two, quad, 3.0) == doctest::Approx(2.0 * base).epsilon(1e-13));
  CHECK_THROWS_AS(lp_norm_ball(u, quad, 0.5), std::invalid_argument);
  SpectralState big = random_state(9, 16);
  CHECK_THROWS_AS(lp_norm_ball(big, quad, 2.0), std::invalid_argument);
}

TEST_CASE("spacetime norm of a single mode is 2^{1/p} times its spatial norm") {
  // |S(t) e_1| is independent of t for a single real mode with unit
  // coefficient: |e^{-i pi t}| = 1, so the time integral contributes a
  // factor of 2^{1/p} exactly.
  RadialQuadrature quad = build_basis(8);
  SpectralState u = SpectralState::zero(1);
  u.coeffs[0] = 1.0;
  const double expected = std::pow(2.0, 0.2) * 0.9107163362098524;
  CHECK(spacetime_lp_norm(u, quad, 5.0, 64) ==
        doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("spacetime norm is homogeneous and validates its arguments") {
  RadialQuadrature quad = build_basis(8);
  SpectralState u = random_state(8, 17);
  const double base = spacetime_lp_norm(u, quad, 5.0, 32);
  SpectralState two = u;
  for (auto& c : two.coeffs) c *= 2.0;
  CHECK(spacetime_lp_norm(two, quad, 5.0, 32) ==
        doctest::Approx(2.0 * base).epsilon(1e-12));
  CHECK_THROWS_AS(spacetime_lp_norm(u, quad, 6.0, 32), std::invalid_argument);
  CHECK_THROWS_AS(spacetime_lp_norm(u, quad, 1.5, 32), std::invalid_argument);
  CHECK_THROWS_AS(spacetime_lp_norm(u, quad, 5.0, 8), std::invalid_argument);
}

TEST_CASE("pow_abs handles integer and fractional exponents") {
  CHECK(pow_abs(-2.0, 3.0) == 8.0);
  CHECK(pow_abs(2.0, 4.0) == 16.0);
  CHECK(pow_abs(-3.0, 2.0) == 9.0);
  CHECK(pow_abs(0.0, 3.5) == 0.0);
  CHECK(pow_abs(-2.0, 3.5) == doctest::Approx(std::pow(2.0, 3.5)).epsilon(1e-15));
}

TEST_CASE("free evolution commutes with smoothing") {
  SmoothingProfile s = make_smoothing(8, 16);
  SpectralState u = random_state(16, 18);
  SpectralState a = apply_smoothing(free_evolve(u, 0.4), s);
  SpectralState b = free_evolve(apply_smoothing(u, s), 0.4);
  for (int n = 0; n < 16; ++n)
    CHECK(std::abs(a.coeffs[n] - b.coeffs[n]) <= 1e-15);
}
