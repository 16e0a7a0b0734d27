#pragma once

#include <cstdint>

// Counter-based randomness. Every random draw in the library is a pure
// function of (root seed, domain tag, index), so results do not depend on
// scheduling, worker count, or evaluation order. Trial streams and per-node
// advice streams are derived with `derive`; sequential draws use `Stream`.

namespace nts::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Domain tags for seed derivation.
inline constexpr std::uint64_t kTrialTag = 0x747269616cULL;    // per-trial stream
inline constexpr std::uint64_t kAdviceTag = 0x616476696365ULL; // per-node advice
inline constexpr std::uint64_t kWalkTag = 0x77616c6bULL;       // walk/step draws

inline std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t tag,
                            std::uint64_t index = 0) {
  std::uint64_t h = mix(seed + kGolden);
  h = mix(h ^ (tag + kGolden));
  h = mix(h ^ (index + kGolden));
  return h;
}

// splitmix64 sequence.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGolden;
    return mix(state_);
  }

  // Uniform in [0,1) with 53 random bits.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0,n), unbiased (Lemire rejection).
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace nts::rng
