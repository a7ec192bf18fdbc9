#pragma once

#include <cstdint>
#include <string>

#include "covertsim/random.hpp"

namespace covertsim {

// Sampling distribution attached to waits, delays and loss decisions.
// Immutable after construction; validate() is called by the factories.
class Distribution {
public:
  enum class Kind { constant, uniform_int, normal_truncated, bernoulli };

  static Distribution constant(double value);
  // Inclusive integer range.
  static Distribution uniform_int(std::int64_t lo, std::int64_t hi);
  // Normal(mean, stddev) resampled until the draw is >= 0. Resampling, not
  // clamping: clamping would put an atom at zero.
  static Distribution normal_truncated(double mean, double stddev);
  static Distribution bernoulli(double p);

  double sample(RandomStream& rng) const;

  Kind kind() const { return kind_; }
  double a() const { return a_; }  // value / lo / mean / p
  double b() const { return b_; }  // - / hi / stddev / -

  // Mean of the untruncated base distribution; used for derived defaults
  // such as retransmission timeouts.
  double nominal_mean() const;

  std::string describe() const;

  friend bool operator==(const Distribution& x, const Distribution& y) {
    return x.kind_ == y.kind_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

private:
  Distribution(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}

  Kind kind_;
  double a_;
  double b_;
};

}  // namespace covertsim
