#pragma once

#include <cstdint>

namespace csl {

// Counter-based uniform stream: draw i of stream (seed, stream_id) is
// mix(state0 + (i+1) * gamma), with a per-stream odd increment.  Streams are
// mutually independent for distinct stream_id and support O(1) skipping.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    const std::uint64_t base = mix(seed + 0x9e3779b97f4a7c15ULL);
    gamma_ = mix(base ^ (stream_id * 0x9e3779b97f4a7c15ULL +
                         0x6a09e667f3bcc909ULL)) |
             1ULL;
    state_ = mix(base + stream_id);
  }

  std::uint64_t next_u64() {
    state_ += gamma_;
    return mix(state_);
  }

  // Uniform on the open interval (0, 1).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  void skip(std::uint64_t n) { state_ += gamma_ * n; }

  // Spare slot for pairwise normal generation.
  bool has_spare = false;
  double spare = 0.0;

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  std::uint64_t gamma_;
};

}  // namespace csl
