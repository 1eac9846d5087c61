#pragma once

#include <complex>
#include <vector>

namespace gibbswave {

// u = sum_{n=1}^{N} c_n e_n with complex coefficients; coeffs[n-1] = c_n.
// The real/imaginary parts are the canonical (a_n, b_n) coordinates of the
// Hamiltonian flow.
struct SpectralState {
  std::vector<std::complex<double>> coeffs;

  int n_modes() const { return static_cast<int>(coeffs.size()); }
  static SpectralState zero(int n_modes) {
    return SpectralState{std::vector<std::complex<double>>(n_modes)};
  }
};

// Wave-equation variables (w, dt_w); related to SpectralState by
// u = w + i*sqrt(-Lap)^{-1} dt_w, i.e. c_n = w_n + i*wt_n/(pi*n).
struct FieldPair {
  std::vector<double> w_coeffs;
  std::vector<double> wt_coeffs;
};

SpectralState pair_to_complex(const FieldPair& f);
FieldPair complex_to_pair(const SpectralState& u);

// (sum_n (pi*n)^{2s} |c_n|^2)^{1/2}
double sobolev_norm(const SpectralState& u, double s);

// S(t) = exp(-i t sqrt(-Lap)): c_n -> exp(-i pi n t) c_n.  The phase is
// reduced mod 2 before multiplying by pi, so S(2) is the identity exactly
// and accuracy does not degrade for large n*t.
SpectralState free_evolve(const SpectralState& u, double t);

}  // namespace gibbswave
