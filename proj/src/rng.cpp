#include "gibbswave/rng.hpp"

#include <cmath>
#include <numbers>

namespace gibbswave {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

GaussianStream::GaussianStream(SeededStream id) {
  // Decorrelate the two words before combining so that nearby (seed,
  // stream_id) pairs start far apart in the counter sequence.
  state_ = mix64(mix64(id.seed + kGamma) + kGamma * (id.stream_id + 1));
}

std::uint64_t GaussianStream::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double GaussianStream::next_uniform() {
  // 53 random bits shifted into (0,1]; never 0, so log() below is safe.
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double GaussianStream::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = next_uniform();
  double u2 = next_uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::complex<double> GaussianStream::next_complex_gaussian() {
  double h = next_gaussian();
  double l = next_gaussian();
  return {h, l};
}

}  // namespace gibbswave
