#pragma once

#include <cstdint>

namespace nfvforge {

/// Finalizer of the SplitMix64 generator (Steele/Lea/Flood; constants as in
/// Vigna's reference implementation). Bijective 64-bit mixing.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// SplitMix64: a 64-bit shift/multiply generator with a Weyl-sequence state.
/// Chosen because the algorithm is fully specified (no implementation-defined
/// behaviour, unlike the std <random> distributions), so every draw is
/// bit-identical across platforms and compilers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return mix64(state_ += kGamma); }

  /// Uniform double in [0, 1) with 53 significant bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

 private:
  std::uint64_t state_;
};

/// Independent sub-stream domains. Each generator stage draws from its own
/// domain so that, e.g., the workload draws for enterprise 3 are unaffected
/// by anything the scaling stage does.
enum class StreamDomain : std::uint64_t {
  kWorkload = 1,
  kScaling = 2,
};

/// Derives the seed of sub-stream `stream` in `domain` from the master seed:
///
///   sub = mix64(mix64(master + gamma * domain) + gamma * (stream + 1))
///
/// where mix64/gamma are the SplitMix64 finalizer and increment. Pure
/// function of (master, domain, stream): adding more streams never perturbs
/// existing ones.
inline std::uint64_t substream_seed(std::uint64_t master, StreamDomain domain,
                                    std::uint64_t stream) {
  const std::uint64_t d = static_cast<std::uint64_t>(domain);
  return mix64(mix64(master + SplitMix64::kGamma * d) +
               SplitMix64::kGamma * (stream + 1));
}

/// Inverse-CDF index draw: maps u in [0,1) to an index in [0, n).
inline int index_for_quantile(double u, int n) {
  const int idx = static_cast<int>(u * static_cast<double>(n));
  return idx >= n ? n - 1 : idx;
}

}  // namespace nfvforge
