#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace rqmc {

/// 64-bit finalizer (SplitMix64 / Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive combination of a key with one more word.
constexpr std::uint64_t hash_combine(std::uint64_t key, std::uint64_t word) {
  return mix64(key ^ mix64(word + 0x9e3779b97f4a7c15ULL));
}

/// SplitMix64 sequence. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform integer in [0, bound), Lemire's multiply-shift with rejection.
  std::uint32_t below(std::uint32_t bound);

  /// Uniform double in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1p-53; }

 private:
  std::uint64_t state_;
};

/// Reproducible random stream identified by (master_seed, stream_id).
///
/// Equal identifiers give identical sequences. Keyed generators derived with
/// keyed() depend only on the identifiers and the key words, never on how much
/// of the sequential stream has been consumed.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  static constexpr result_type min() { return SplitMix64::min(); }
  static constexpr result_type max() { return SplitMix64::max(); }
  result_type operator()() { return gen_(); }

  std::uint32_t below(std::uint32_t bound) { return gen_.below(bound); }
  double uniform() { return gen_.uniform(); }
  double normal() { return normal_(gen_); }

  /// Independent generator for the given key words.
  SplitMix64 keyed(std::uint64_t a, std::uint64_t b = 0) const {
    return SplitMix64(hash_combine(hash_combine(key_, a), b));
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  SplitMix64 gen_;
  std::normal_distribution<double> normal_;
};

/// Seed for the t-th repetition of a cell run under master_seed.
constexpr std::uint64_t repetition_seed(std::uint64_t master_seed, std::uint64_t repetition) {
  return hash_combine(mix64(master_seed ^ 0x5851f42d4c957f2dULL), repetition);
}

}  // namespace rqmc
