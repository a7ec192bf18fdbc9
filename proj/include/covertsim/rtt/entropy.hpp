#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace covertsim::rtt {

// Shannon entropy of a Bernoulli(p) bit, in bits; 0 log 0 reads as 0.
double binary_entropy(double p);

// Empirical entropy of each of the 8 bit positions over the byte sample.
// Position i in the result is bit i (least significant first); every entry
// lies in [0, 1]. Caller guarantees a non-empty sample.
std::array<double, 8> per_bit_entropies(const std::vector<std::uint8_t>& bytes);

double mean_of(const std::array<double, 8>& xs);

}  // namespace covertsim::rtt
