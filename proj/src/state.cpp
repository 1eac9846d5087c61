#include "gibbswave/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gibbswave {

namespace {
constexpr double kPi = std::numbers::pi;
}

SpectralState pair_to_complex(const FieldPair& f) {
  if (f.w_coeffs.size() != f.wt_coeffs.size())
    throw std::invalid_argument("pair_to_complex: length mismatch");
  SpectralState u;
  u.coeffs.resize(f.w_coeffs.size());
  for (std::size_t i = 0; i < f.w_coeffs.size(); ++i) {
    double n = static_cast<double>(i + 1);
    u.coeffs[i] = {f.w_coeffs[i], f.wt_coeffs[i] / (kPi * n)};
  }
  return u;
}

FieldPair complex_to_pair(const SpectralState& u) {
  FieldPair f;
  f.w_coeffs.resize(u.coeffs.size());
  f.wt_coeffs.resize(u.coeffs.size());
  for (std::size_t i = 0; i < u.coeffs.size(); ++i) {
    double n = static_cast<double>(i + 1);
    f.w_coeffs[i] = u.coeffs[i].real();
    f.wt_coeffs[i] = kPi * n * u.coeffs[i].imag();
  }
  return f;
}

double sobolev_norm(const SpectralState& u, double s) {
  double acc = 0.0;
  if (s == 0.0) {
    for (const auto& c : u.coeffs) acc += std::norm(c);
  } else {
    for (std::size_t i = 0; i < u.coeffs.size(); ++i) {
      double n = static_cast<double>(i + 1);
      acc += std::pow(kPi * n, 2.0 * s) * std::norm(u.coeffs[i]);
    }
  }
  return std::sqrt(acc);
}

SpectralState free_evolve(const SpectralState& u, double t) {
  SpectralState v;
  v.coeffs.resize(u.coeffs.size());
  for (std::size_t i = 0; i < u.coeffs.size(); ++i) {
    double n = static_cast<double>(i + 1);
    // phase is 2-periodic in n*t; reducing before the multiply keeps S(2)
    // exactly the identity and avoids precision loss at large n*t
    double m = std::fmod(n * t, 2.0);
    double th = kPi * m;
    double c = std::cos(th), s = std::sin(th);
    double re = u.coeffs[i].real(), im = u.coeffs[i].imag();
    v.coeffs[i] = {re * c + im * s, im * c - re * s};
  }
  return v;
}

}  // namespace gibbswave
