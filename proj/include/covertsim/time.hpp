#pragma once

#include <limits>
#include <ostream>

namespace covertsim {

// Virtual simulation time. One unit is one millisecond in the network
// scenarios. Values are non-negative; infinity marks "never" (disarmed
// timers, exhausted schedules).
class Time {
public:
  constexpr Time() = default;
  constexpr explicit Time(double v) : v_(v) {}

  static constexpr Time zero() { return Time(0.0); }
  static constexpr Time infinity() {
    return Time(std::numeric_limits<double>::infinity());
  }

  constexpr double value() const { return v_; }
  constexpr bool is_infinite() const {
    return v_ == std::numeric_limits<double>::infinity();
  }
  constexpr bool is_finite() const { return !is_infinite(); }

  friend constexpr bool operator==(Time a, Time b) { return a.v_ == b.v_; }
  friend constexpr bool operator!=(Time a, Time b) { return a.v_ != b.v_; }
  friend constexpr bool operator<(Time a, Time b) { return a.v_ < b.v_; }
  friend constexpr bool operator<=(Time a, Time b) { return a.v_ <= b.v_; }
  friend constexpr bool operator>(Time a, Time b) { return a.v_ > b.v_; }
  friend constexpr bool operator>=(Time a, Time b) { return a.v_ >= b.v_; }

  friend constexpr Time operator+(Time a, Time b) { return Time(a.v_ + b.v_); }
  // Difference of time points. Caller guarantees a >= b; infinite minus
  // finite stays infinite.
  friend constexpr Time operator-(Time a, Time b) {
    if (a.is_infinite()) return infinity();
    return Time(a.v_ - b.v_);
  }

  friend std::ostream& operator<<(std::ostream& os, Time t) {
    if (t.is_infinite()) return os << "inf";
    return os << t.v_;
  }

private:
  double v_ = 0.0;
};

inline constexpr Time min(Time a, Time b) { return a < b ? a : b; }

// Project convention: one time unit is one millisecond.
inline constexpr double kUnitsPerSecond = 1000.0;

inline constexpr double to_seconds(Time t) { return t.value() / kUnitsPerSecond; }

}  // namespace covertsim
