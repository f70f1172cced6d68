#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace causalpost {

/// Seedable random stream keyed by (seed, stream).
///
/// Output is xoshiro256** (Blackman & Vigna, v1.0). The 256-bit state is
/// filled by interleaving two SplitMix64 sequences, one started from the
/// seed and one from the stream id, followed by 16 discarded outputs. The
/// mapping (seed, stream) -> state is injective, so distinct keys never
/// share a sequence. Variate transforms below use only IEEE-exact
/// arithmetic plus std::log/std::sqrt, so a given key reproduces the same
/// bits on any conforming platform with a correctly rounded libm.
///
/// The class is a value type. Copying an Rng forks an identical sequence.
class Rng {
 public:
  using result_type = std::uint64_t;

  /// Bumped whenever the output sequence for a key would change.
  static constexpr int kAlgorithmVersion = 1;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform();

  /// Standard normal via the Marsaglia polar method; the second variate of
  /// each accepted pair is cached and returned by the next call.
  double standard_normal();

  /// Unit-rate exponential.
  double standard_exponential();

  /// Uniform integer in [0, bound). Lemire's nearly-divisionless method.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Independent child stream, a pure function of (seed, stream, k).
  Rng substream(std::uint64_t k) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace causalpost
