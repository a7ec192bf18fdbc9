#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "covertsim/trace.hpp"

namespace covertsim {

// Detectors run offline over an observable trace and either raise an alarm
// at some time within the horizon or stay quiet. They are deterministic:
// same trace, same verdict.

struct Verdict {
  bool alarmed = false;
  Time alarm_at = Time::infinity();
};

// Events a detector looks at: kind plus direction filter. Direction
// defaults to egress because the exfiltration story is corporate-to-public.
struct EventFilter {
  MsgKind kind = MsgKind::dns_query;
  Direction direction = Direction::egress;

  bool matches(const ObservableEvent& ev) const {
    return ev.kind == kind && ev.direction == direction;
  }
};

// Alarms when the running count of matching events strictly exceeds the
// threshold; the alarm time is the event that crosses it.
struct CumulativeCountDetector {
  std::string name;
  EventFilter filter;
  std::uint64_t threshold = 0;  // alarm on count > threshold
};

// Alarms at the end of the n-th consecutive bin whose trailing-window
// average rate strictly exceeds multiplier * base_rate. Rates are events
// per second; window and bin are in time units (ms). With baseline_warmup
// the window is seeded with base_rate worth of synthetic events at t < 0 so
// the first bins are not spuriously quiet.
struct MovingAverageRateDetector {
  std::string name;
  EventFilter filter;
  Time window = Time(60'000.0);
  Time bin = Time(10'000.0);
  double multiplier = 2.0;
  double base_rate_per_s = 1.0;
  int consecutive_bins = 3;
  bool baseline_warmup = true;
};

using Detector = std::variant<CumulativeCountDetector, MovingAverageRateDetector>;

const std::string& detector_name(const Detector& d);

// Evaluates the detector over the trace's whole horizon.
Verdict run_detector(const Detector& d, const ObservableTrace& trace);

Verdict run_detector(const CumulativeCountDetector& d,
                     const ObservableTrace& trace);
Verdict run_detector(const MovingAverageRateDetector& d,
                     const ObservableTrace& trace);

}  // namespace covertsim
