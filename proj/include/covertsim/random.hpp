#pragma once

#include <cstdint>
#include <string_view>

namespace covertsim {

// Deterministic, splittable random streams. Every stochastic entity in a
// simulation (actor, link, auxiliary source) owns a stream derived from the
// run's root seed and a stable label, so adding or removing one entity never
// perturbs the samples another entity draws. Hand-rolled generators keep the
// bit streams independent of the standard library implementation.

std::uint64_t splitmix64_next(std::uint64_t& state);

// 64-bit FNV-1a over the label bytes; stable key for stream derivation.
std::uint64_t fnv1a64(std::string_view s);

// Derives a child seed from a parent seed and a label.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

// Counter-indexed pseudorandom byte: position idx of the byte sequence named
// by seed. Used for keystreams and covert byte sources; stateless, so two
// endpoints sharing the seed read identical sequences.
std::uint8_t prf_byte(std::uint64_t seed, std::uint64_t index);

// xoshiro256++ keyed by (root seed, label path). Streams with distinct
// labels are statistically independent.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed);
  RandomStream(std::uint64_t root_seed, std::string_view label);

  RandomStream child(std::string_view label) const;

  std::uint64_t next_u64();
  // Uniform in [0, 1), 53-bit resolution.
  double next_unit();
  // Unbiased uniform in [0, bound); bound > 0.
  std::uint64_t next_below(std::uint64_t bound);
  // Uniform integer in [lo, hi], both ends inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi);
  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double next_normal();
  bool next_bernoulli(double p);

  std::uint64_t seed() const { return seed_; }

private:
  std::uint64_t seed_ = 0;  // derivation key, kept for child()
  std::uint64_t s_[4] = {};
};

}  // namespace covertsim
