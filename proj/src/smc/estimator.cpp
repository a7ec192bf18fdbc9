#include "covertsim/smc/estimator.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>

#include "covertsim/errors.hpp"
#include "covertsim/random.hpp"

namespace covertsim::smc {

std::uint64_t run_seed(std::uint64_t root_seed, std::string_view tag,
                       std::uint64_t index) {
  return derive_seed(derive_seed(root_seed, tag), index);
}

namespace {

// Prefix statistics folded in index order (Welford), so every worker
// schedule produces identical numbers.
struct Accumulator {
  std::uint64_t used = 0;
  std::uint64_t discarded = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void fold(const PropertyValue& v) {
    if (v.discarded) {
      ++discarded;
      return;
    }
    ++used;
    const double d = v.value - mean;
    mean += d / static_cast<double>(used);
    m2 += d * (v.value - mean);
  }

  // Half-width of the two-sided Student-t interval; infinite until two
  // usable samples exist.
  double radius(double alpha) const {
    if (used < 2) return std::numeric_limits<double>::infinity();
    const double var = m2 / static_cast<double>(used - 1);
    const double se = std::sqrt(var / static_cast<double>(used));
    boost::math::students_t dist(static_cast<double>(used - 1));
    return boost::math::quantile(dist, 1.0 - alpha / 2.0) * se;
  }

  Estimate estimate(double alpha, std::uint64_t runs, bool converged) const {
    Estimate e;
    e.alpha = alpha;
    e.runs = runs;
    e.converged = converged;
    e.used = used;
    e.discarded = discarded;
    if (used == 0) {
      e.impossible = true;
      return e;
    }
    e.mean = mean;
    e.radius = radius(alpha);
    return e;
  }
};

void check_params(const SmcParams& p) {
  if (!(p.alpha > 0.0 && p.alpha < 1.0))
    throw ConfigurationError("alpha must be in (0, 1)");
  if (!(p.delta > 0.0)) throw ConfigurationError("delta must be > 0");
  if (p.min_runs < 2) throw ConfigurationError("min_runs must be >= 2");
  if (p.max_runs < p.min_runs)
    throw ConfigurationError("max_runs must be >= min_runs");
}

}  // namespace

std::vector<Estimate> estimate_expectations(const MultiSampler& sample,
                                            std::size_t n_properties,
                                            const SmcParams& params) {
  check_params(params);
  if (n_properties == 0) return {};

  const double target = params.delta / 2.0;
  std::vector<std::vector<PropertyValue>> samples;  // by run index
  samples.reserve(1024);
  std::vector<Accumulator> acc(n_properties);
  std::uint64_t scanned = 0;

  const std::uint64_t batch =
      std::max<std::uint64_t>(64, static_cast<std::uint64_t>(
                                      params.workers < 1 ? 1 : params.workers) *
                                      8);

  while (true) {
    const std::uint64_t have = samples.size();
    const std::uint64_t want =
        std::min(params.max_runs, have + batch);
    std::function<std::vector<PropertyValue>(std::uint64_t)> job =
        [&](std::uint64_t i) {
          const std::uint64_t idx = have + i;
          return sample(idx, run_seed(params.root_seed, params.seed_tag, idx));
        };
    auto fresh = parallel_map<std::vector<PropertyValue>>(
        want - have, params.workers, job);
    for (auto& row : fresh) {
      if (row.size() != n_properties)
        throw InternalError("sampler returned wrong property count");
      samples.push_back(std::move(row));
    }

    // Scan unseen prefix lengths in order; stop at the first length where
    // every property is inside the width target.
    while (scanned < samples.size()) {
      const auto& row = samples[scanned];
      for (std::size_t p = 0; p < n_properties; ++p) acc[p].fold(row[p]);
      ++scanned;
      if (scanned < params.min_runs) continue;
      bool all_ok = true;
      for (const auto& a : acc)
        if (!(a.radius(params.alpha) <= target)) {
          all_ok = false;
          break;
        }
      if (all_ok) {
        std::vector<Estimate> out;
        out.reserve(n_properties);
        for (const auto& a : acc)
          out.push_back(a.estimate(params.alpha, scanned, true));
        return out;
      }
    }

    if (samples.size() >= params.max_runs) break;
  }

  std::vector<Estimate> out;
  out.reserve(n_properties);
  for (const auto& a : acc)
    out.push_back(a.estimate(params.alpha, scanned, false));
  return out;
}

Estimate summarize(const std::vector<PropertyValue>& values, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ConfigurationError("alpha must be in (0, 1)");
  Accumulator acc;
  for (const auto& v : values) acc.fold(v);
  return acc.estimate(alpha, values.size(), false);
}

Estimate estimate_expectation(const Sampler& sample, const SmcParams& params) {
  MultiSampler wrap = [&](std::uint64_t i, std::uint64_t seed) {
    return std::vector<PropertyValue>{sample(i, seed)};
  };
  return estimate_expectations(wrap, 1, params).front();
}

RatePair estimate_rates(const IndicatorSampler& alarm, std::uint64_t n,
                        double joint_coverage, bool paired,
                        std::uint64_t root_seed, int workers) {
  if (n == 0) throw ConfigurationError("estimate_rates: n must be >= 1");
  if (!(joint_coverage > 0.0 && joint_coverage < 1.0))
    throw ConfigurationError("joint coverage must be in (0, 1)");

  // Index space [0, 2n): first the hcs runs, then the ordinary runs.
  std::function<std::uint8_t(std::uint64_t)> job = [&](std::uint64_t i) {
    const bool is_hcs = i < n;
    const std::uint64_t idx = is_hcs ? i : i - n;
    const WorldKind w = is_hcs ? WorldKind::hcs : WorldKind::ordinary;
    const std::uint64_t seed =
        paired ? run_seed(root_seed, "paired", idx)
               : run_seed(root_seed, world_name(w), idx);
    return static_cast<std::uint8_t>(alarm(w, idx, seed) ? 1 : 0);
  };
  const auto hits = parallel_map<std::uint8_t>(2 * n, workers, job);

  std::uint64_t tp = 0, fp = 0;
  for (std::uint64_t i = 0; i < n; ++i) tp += hits[i];
  for (std::uint64_t i = n; i < 2 * n; ++i) fp += hits[i];

  const double per_interval = 1.0 - (1.0 - joint_coverage) / 2.0;
  RatePair out;
  out.tpr = clopper_pearson(tp, n, per_interval);
  out.fpr = clopper_pearson(fp, n, per_interval);
  out.joint_coverage = joint_coverage;
  out.paired = paired;
  return out;
}

}  // namespace covertsim::smc
