#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "covertsim/properties.hpp"
#include "covertsim/smc/binomial.hpp"
#include "covertsim/world.hpp"

namespace covertsim::smc {

// Monte-Carlo estimation over seeded runs. Estimates are bit-reproducible:
// run i always gets the same derived seed, samples are folded in index
// order, and the adaptive stop is a function of sample prefixes, so neither
// the worker count nor batch sizing can change the result.

struct SmcParams {
  double alpha = 0.05;   // confidence level 1 - alpha
  double delta = 0.1;    // target CI width; stop when radius <= delta / 2
  std::uint64_t min_runs = 30;
  std::uint64_t max_runs = 100000;
  int workers = 1;
  std::uint64_t root_seed = 1;
  std::string seed_tag = "runs";  // world/purpose tag mixed into run seeds
};

struct Estimate {
  double mean = 0.0;
  double radius = 0.0;  // achieved half-width at 1 - alpha
  double alpha = 0.05;
  std::uint64_t used = 0;       // non-discarded samples folded in
  std::uint64_t discarded = 0;  // discarded samples within the used prefix
  std::uint64_t runs = 0;       // prefix length the estimate froze at
  bool converged = false;       // hit the width target before max_runs
  bool impossible = false;      // no usable sample at all
};

// Seed for run `index` under `tag`; stable under everything but the root.
std::uint64_t run_seed(std::uint64_t root_seed, std::string_view tag,
                       std::uint64_t index);

// Runs fn(0..count-1) on `workers` threads, results in index order.
template <class T>
std::vector<T> parallel_map(std::uint64_t count, int workers,
                            const std::function<T(std::uint64_t)>& fn) {
  std::vector<T> out(count);
  const int w = workers < 1 ? 1 : workers;
  if (w == 1 || count <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  for (int t = 0; t < w; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= count) break;
        out[i] = fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

// One sample per run: the property value of the seeded simulation.
using Sampler =
    std::function<PropertyValue(std::uint64_t index, std::uint64_t seed)>;
using MultiSampler = std::function<std::vector<PropertyValue>(
    std::uint64_t index, std::uint64_t seed)>;

// Student-t interval, adaptive n: extends in batches until the half-width
// target is met at the smallest prefix (scanned run by run) or max_runs.
Estimate estimate_expectation(const Sampler& sample, const SmcParams& params);

// Same runs feeding several properties; the prefix freezes when every
// property meets the target (or max_runs). One Estimate per property.
std::vector<Estimate> estimate_expectations(const MultiSampler& sample,
                                            std::size_t n_properties,
                                            const SmcParams& params);

// Fixed-batch summary of precomputed samples, folded in order. converged
// stays false: no width target was in play.
Estimate summarize(const std::vector<PropertyValue>& values, double alpha);

// Alarm-rate pair for the paired worlds at fixed n per world. Exact
// intervals; each side gets coverage 1 - (1 - joint) / 2, so by the union
// bound both hold jointly with probability >= joint.
struct RatePair {
  RateInterval tpr;  // hcs world alarm rate
  RateInterval fpr;  // ordinary world alarm rate
  double joint_coverage = 0.95;
  bool paired = false;
};

using IndicatorSampler = std::function<bool(
    WorldKind world, std::uint64_t index, std::uint64_t seed)>;

// mode paired: run i uses one shared seed in both worlds; independent:
// each world derives its own seed sequence.
RatePair estimate_rates(const IndicatorSampler& alarm, std::uint64_t n,
                        double joint_coverage, bool paired,
                        std::uint64_t root_seed, int workers);

}  // namespace covertsim::smc
