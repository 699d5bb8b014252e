#include "lrp/rng.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <cmath>

#include "lrp/errors.hpp"

namespace lrp {

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t basis) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = basis;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

namespace {

std::uint64_t derive_key(std::uint64_t parent, std::string_view label) {
  // Two finalizer rounds separate the parent key from the label hash.
  return mix64(mix64(parent + 0x9e3779b97f4a7c15ULL) ^ fnv1a64(label));
}

}  // namespace

Stream Stream::child(std::string_view label) const {
  return Stream(derive_key(key_, label));
}

Stream derive_stream(std::uint64_t master_seed, std::string_view label) {
  return Stream(derive_key(mix64(master_seed ^ 0x6a09e667f3bcc909ULL), label));
}

double Stream::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(*this);
}

std::uint64_t Stream::poisson(double mean) {
  require(std::isfinite(mean) && mean >= 0.0, "poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  boost::random::poisson_distribution<std::int64_t, double> dist(mean);
  return static_cast<std::uint64_t>(dist(*this));
}

std::uint64_t Stream::geometric_failures(double p) {
  if (p >= 1.0) return 0;
  const double lq = std::log1p(-p);
  const double g = std::floor(std::log(uniform_pos()) / lq);
  if (g >= 9.0e18) return std::numeric_limits<std::uint64_t>::max() / 2;
  return static_cast<std::uint64_t>(g);
}

std::uint64_t Stream::below(std::uint64_t n) {
  // Lemire's nearly-divisionless rejection.
  std::uint64_t x = (*this)();
  __uint128_t m = static_cast<__uint128_t>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t t = -n % n;
    while (low < t) {
      x = (*this)();
      m = static_cast<__uint128_t>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace lrp
