#ifndef AIRY_RANDOM_HPP
#define AIRY_RANDOM_HPP

#include <cstdint>

namespace airy {

/// SplitMix64 (Steele, Lea, Flood). Platform-independent, so seeded reports are
/// bit-reproducible; std::uniform_real_distribution is not.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace airy

#endif  // AIRY_RANDOM_HPP
