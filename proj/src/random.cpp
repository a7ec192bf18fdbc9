#include "covertsim/random.hpp"

#include <cmath>

#include "covertsim/errors.hpp"

namespace covertsim {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view label) {
  std::uint64_t st = parent ^ fnv1a64(label);
  std::uint64_t a = splitmix64_next(st);
  std::uint64_t b = splitmix64_next(st);
  return a ^ (b << 1);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  std::uint64_t st = parent ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  std::uint64_t a = splitmix64_next(st);
  std::uint64_t b = splitmix64_next(st);
  return a ^ (b << 1);
}

std::uint8_t prf_byte(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t st = seed ^ (0xd1b54a32d192ed03ULL * (index + 1));
  return static_cast<std::uint8_t>(splitmix64_next(st) & 0xFF);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed) {
  std::uint64_t st = seed;
  for (auto& w : s_) w = splitmix64_next(st);
}

RandomStream::RandomStream(std::uint64_t root_seed, std::string_view label)
    : RandomStream(derive_seed(root_seed, label)) {}

RandomStream RandomStream::child(std::string_view label) const {
  return RandomStream(derive_seed(seed_, label));
}

std::uint64_t RandomStream::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw InternalError("next_below: bound must be positive");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

std::int64_t RandomStream::next_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw InternalError("next_int: empty range");
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  return lo + static_cast<std::int64_t>(next_below(span));
}

double RandomStream::next_normal() {
  // Box-Muller, cosine branch only: two uniforms per draw, no carried state,
  // so interleaved callers stay reproducible.
  double u1 = next_unit();
  const double u2 = next_unit();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

bool RandomStream::next_bernoulli(double p) { return next_unit() < p; }

}  // namespace covertsim
