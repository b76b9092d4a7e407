#ifndef SATSEL_RNG_HPP
#define SATSEL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>

namespace satsel {

/// Counter-based pseudo-random generator with cheap stream splitting.
///
/// The i-th output of a stream with key k is mix(k + i * GAMMA), the
/// SplitMix64 construction. Streams are derived deterministically:
/// split(j) of a stream with key k yields the stream with key
/// mix(k ^ mix(j + 1)), independent of how many values the parent has
/// produced. All randomized code in the library receives an Rng
/// explicitly; reproducibility from one master seed follows from the
/// derivation rule alone.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : key_(mix(seed + kGamma)), counter_(0) {}

  /// Derive an independent child stream; does not advance this stream.
  Rng split(std::uint64_t stream) const {
    Rng child(*this);
    child.key_ = mix(key_ ^ mix(stream + 1));
    child.counter_ = 0;
    child.has_spare_ = false;
    return child;
  }

  std::uint64_t next() { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound); bound > 0. Unbiased via rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Standard normal deviate (Marsaglia polar method).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // UniformRandomBitGenerator interface.
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() {
    return std::numeric_limits<std::uint64_t>::max();
  }

private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace satsel

#endif
