#include "covertsim/distribution.hpp"

#include <cmath>
#include <sstream>

#include "covertsim/errors.hpp"

namespace covertsim {

Distribution Distribution::constant(double value) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw ConfigurationError("constant distribution needs a finite value >= 0");
  return Distribution(Kind::constant, value, 0.0);
}

Distribution Distribution::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw ConfigurationError("uniform_int needs lo <= hi");
  return Distribution(Kind::uniform_int, static_cast<double>(lo),
                      static_cast<double>(hi));
}

Distribution Distribution::normal_truncated(double mean, double stddev) {
  if (!std::isfinite(mean) || !std::isfinite(stddev) || stddev < 0.0)
    throw ConfigurationError("normal_truncated needs finite mean, stddev >= 0");
  return Distribution(Kind::normal_truncated, mean, stddev);
}

Distribution Distribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ConfigurationError("bernoulli needs p in [0, 1]");
  return Distribution(Kind::bernoulli, p, 0.0);
}

double Distribution::sample(RandomStream& rng) const {
  switch (kind_) {
    case Kind::constant:
      return a_;
    case Kind::uniform_int:
      return static_cast<double>(rng.next_int(static_cast<std::int64_t>(a_),
                                              static_cast<std::int64_t>(b_)));
    case Kind::normal_truncated: {
      for (;;) {
        const double v = a_ + b_ * rng.next_normal();
        if (v >= 0.0) return v;
      }
    }
    case Kind::bernoulli:
      return rng.next_bernoulli(a_) ? 1.0 : 0.0;
  }
  throw InternalError("unreachable distribution kind");
}

double Distribution::nominal_mean() const {
  switch (kind_) {
    case Kind::constant:
      return a_;
    case Kind::uniform_int:
      return (a_ + b_) / 2.0;
    case Kind::normal_truncated:
      return a_;
    case Kind::bernoulli:
      return a_;
  }
  throw InternalError("unreachable distribution kind");
}

std::string Distribution::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant:
      os << "constant(" << a_ << ")";
      break;
    case Kind::uniform_int:
      os << "uniform_int(" << static_cast<std::int64_t>(a_) << ", "
         << static_cast<std::int64_t>(b_) << ")";
      break;
    case Kind::normal_truncated:
      os << "normal_truncated(" << a_ << ", " << b_ << ")";
      break;
    case Kind::bernoulli:
      os << "bernoulli(" << a_ << ")";
      break;
  }
  return os.str();
}

}  // namespace covertsim
