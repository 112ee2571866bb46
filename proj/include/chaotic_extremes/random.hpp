#ifndef CHAOTIC_EXTREMES_RANDOM_HPP
#define CHAOTIC_EXTREMES_RANDOM_HPP

#include <array>
#include <cstdint>

namespace chaotic_extremes {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// xoshiro256** (Blackman and Vigna), a UniformRandomBitGenerator with a
/// 256-bit state. Seeding costs four splitmix64 steps, which matters when
/// every Monte-Carlo trial gets its own stream.
class Engine {
 public:
  using result_type = std::uint64_t;

  explicit Engine(std::uint64_t seed) noexcept {
    for (auto& w : s_) {
      seed += 0x9e3779b97f4a7c15ULL;
      w = detail::splitmix64(seed);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

/// Generator for replica `index` of a run seeded with `seed`. Streams depend
/// only on (seed, index), so work can be scheduled in any order.
inline Engine substream(std::uint64_t seed, std::uint64_t index) noexcept {
  return Engine(detail::splitmix64(detail::splitmix64(seed) + 0xd1b54a32d192ed03ULL * (index + 1)));
}

/// Uniform draw on the open interval (0, 1) with 53 random bits. Spelled out
/// so that values do not depend on the standard library's distributions.
template <class URBG>
double uniform_open01(URBG& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform draw on (-1, 1).
template <class URBG>
double uniform_symmetric(URBG& g) {
  return 2.0 * uniform_open01(g) - 1.0;
}

}  // namespace chaotic_extremes

#endif  // CHAOTIC_EXTREMES_RANDOM_HPP
