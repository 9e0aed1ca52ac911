#pragma once

#include <cmath>
#include <cstdint>

namespace progress {

/// SplitMix64 stream. Used instead of <random> engines/distributions so that
/// sampled values are identical across standard libraries and platforms,
/// which the reproducibility contract requires.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n) via 128-bit multiply-shift.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Standard normal via Box-Muller. Uniforms are shifted away from 0 so the
  /// log is always finite.
  double next_normal() {
    double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

private:
  std::uint64_t state_;
};

/// Domains keep the per-item streams of unrelated work (starts, bootstrap
/// replicates, LOO folds, predictive draws) disjoint.
enum class StreamDomain : std::uint64_t {
  MultiStart = 1,
  Bootstrap = 2,
  BootstrapFit = 3,
  LooFold = 4,
  Predictive = 5,
};

/// Derives an independent stream seed from (master, domain, index). Each work
/// item gets its own stream, so results do not depend on scheduling order.
inline std::uint64_t derive_stream(std::uint64_t master, StreamDomain domain,
                                   std::uint64_t index) {
  Rng mix(master ^ (static_cast<std::uint64_t>(domain) * 0xA24BAED4963EE407ULL));
  std::uint64_t a = mix.next_u64();
  Rng mix2(a ^ (index * 0x9FB21C651E98DF25ULL));
  return mix2.next_u64();
}

}  // namespace progress
