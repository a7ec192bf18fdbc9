#include "covertsim/smc/binomial.hpp"

#include <boost/math/special_functions/beta.hpp>

#include "covertsim/errors.hpp"

namespace covertsim::smc {

RateInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                             double coverage) {
  if (trials == 0) throw ConfigurationError("clopper_pearson: zero trials");
  if (successes > trials)
    throw ConfigurationError("clopper_pearson: successes > trials");
  if (!(coverage > 0.0 && coverage < 1.0))
    throw ConfigurationError("clopper_pearson: coverage must be in (0, 1)");

  const double tail = (1.0 - coverage) / 2.0;
  const auto k = static_cast<double>(successes);
  const auto n = static_cast<double>(trials);

  RateInterval out;
  out.successes = successes;
  out.trials = trials;
  out.coverage = coverage;
  // Beta quantiles invert the binomial tails exactly.
  out.lower = successes == 0
                  ? 0.0
                  : boost::math::ibeta_inv(k, n - k + 1.0, tail);
  out.upper = successes == trials
                  ? 1.0
                  : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - tail);
  return out;
}

}  // namespace covertsim::smc
