#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

namespace lrp {

/// 64-bit FNV-1a over a byte range.
std::uint64_t fnv1a64(const void* data, std::size_t size,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(std::string_view s);

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream: the i-th output is a pure function of
/// (key, i), so a stream is reproducible bit-for-bit on every platform.
/// Streams are values; copy one to fork an identical sequence, or derive
/// a child with `child(label)` for an independent one.
///
/// Satisfies UniformRandomBitGenerator so Boost.Random distributions
/// (whose algorithms do not vary across standard libraries) can draw from it.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  Stream child(std::string_view label) const;

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double exponential() { return -std::log(uniform_pos()); }
  /// Poisson variate; mean must be finite and nonnegative.
  std::uint64_t poisson(double mean);
  /// Number of failures before the first success of a Bernoulli(p) sequence.
  std::uint64_t geometric_failures(double p);
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Child stream for (master_seed, label). Identical inputs give identical
/// streams; distinct seeds or labels give unrelated keys.
Stream derive_stream(std::uint64_t master_seed, std::string_view label);

}  // namespace lrp
