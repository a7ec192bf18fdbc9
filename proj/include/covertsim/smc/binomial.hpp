#pragma once

#include <cstdint>

namespace covertsim::smc {

// Exact (Clopper-Pearson) confidence interval for a binomial proportion.
// Equal-tail convention throughout, boundaries included: at k = 0 the lower
// bound is 0 and the upper still solves the tail equation at alpha/2, so
// coverage is at least the nominal level for every true p.
struct RateInterval {
  double lower = 0.0;
  double upper = 1.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double coverage = 0.0;  // nominal two-sided level, e.g. 0.975

  double point() const {
    return trials == 0 ? 0.0
                       : static_cast<double>(successes) /
                             static_cast<double>(trials);
  }
};

// coverage in (0, 1); trials >= 1; successes <= trials.
RateInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                             double coverage);

}  // namespace covertsim::smc
