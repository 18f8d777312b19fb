#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace rmt {

// Counter-based stream: output k is a strong 64-bit mix of (key, k), so any
// (seed, stream_id) pair reproduces the same sequence regardless of thread
// count, and distinct stream_ids decorrelate. Per-trial substreams make
// parallel Monte Carlo bitwise reproducible.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    key_ = mix(seed + 0x9E3779B97F4A7C15ULL * mix(stream_id + 0xD1B54A32D192ED03ULL));
  }

  std::uint64_t next_u64() { return mix(key_ + 0x9E3779B97F4A7C15ULL * ++ctr_); }

  // Uniform on (0,1); never returns 0 so log() is safe.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Standard complex Gaussian: Re and Im independent N(0,1/2), E|z|^2 = 1.
  std::complex<double> complex_normal() {
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    double re = normal() * inv_sqrt2;
    double im = normal() * inv_sqrt2;
    return {re, im};
  }

  // Gamma(shape, 1), shape >= 1 (Marsaglia-Tsang squeeze).
  double gamma(double shape) {
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = uniform();
      double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  // Stafford mix13 variant of splitmix64's finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t ctr_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rmt
