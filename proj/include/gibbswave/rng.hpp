#pragma once

#include <complex>
#include <cstdint>

namespace gibbswave {

// One logical random stream per ensemble member.  Identical (seed, stream_id)
// must reproduce identical draws regardless of worker scheduling, so streams
// never share state.
struct SeededStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Counter-based generator: splitmix64 over a state derived from
// (seed, stream_id).  Gaussians come from Box-Muller on explicitly
// constructed uniforms; we do not use std::normal_distribution because its
// algorithm is implementation-defined and the draws here are part of the
// reproducibility contract.
class GaussianStream {
 public:
  explicit GaussianStream(SeededStream id);

  std::uint64_t next_u64();
  double next_uniform();  // in (0,1]
  double next_gaussian();
  // h + i*l with h, l independent N(0,1); E|g|^2 = 2.  h is drawn first.
  std::complex<double> next_complex_gaussian();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gibbswave
