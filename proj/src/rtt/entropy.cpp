#include "covertsim/rtt/entropy.hpp"

#include <cmath>

#include "covertsim/errors.hpp"

namespace covertsim::rtt {

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InternalError("binary_entropy: p outside [0, 1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

std::array<double, 8> per_bit_entropies(
    const std::vector<std::uint8_t>& bytes) {
  if (bytes.empty())
    throw InternalError("per_bit_entropies: empty sample");
  std::array<std::uint64_t, 8> ones{};
  for (std::uint8_t b : bytes)
    for (int i = 0; i < 8; ++i)
      if (b & (1u << i)) ++ones[i];
  std::array<double, 8> out{};
  const double n = static_cast<double>(bytes.size());
  for (int i = 0; i < 8; ++i)
    out[i] = binary_entropy(static_cast<double>(ones[i]) / n);
  return out;
}

double mean_of(const std::array<double, 8>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / 8.0;
}

}  // namespace covertsim::rtt
