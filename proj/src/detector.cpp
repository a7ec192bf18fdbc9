#include "covertsim/detector.hpp"

#include <algorithm>
#include <cmath>

#include "covertsim/errors.hpp"

namespace covertsim {

const std::string& detector_name(const Detector& d) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; },
                    d);
}

Verdict run_detector(const Detector& d, const ObservableTrace& trace) {
  return std::visit([&](const auto& x) { return run_detector(x, trace); }, d);
}

Verdict run_detector(const CumulativeCountDetector& d,
                     const ObservableTrace& trace) {
  std::uint64_t count = 0;
  for (const auto& ev : trace.events) {
    if (ev.at > trace.horizon) break;
    if (!d.filter.matches(ev)) continue;
    if (++count > d.threshold) return Verdict{true, ev.at};
  }
  return Verdict{};
}

Verdict run_detector(const MovingAverageRateDetector& d,
                     const ObservableTrace& trace) {
  if (!(d.window.value() > 0.0) || !(d.bin.value() > 0.0))
    throw ConfigurationError("moving-average detector needs window, bin > 0");
  if (d.consecutive_bins < 1)
    throw ConfigurationError("moving-average detector needs n >= 1");

  // Matching event times, already sorted.
  std::vector<double> times;
  for (const auto& ev : trace.events) {
    if (ev.at > trace.horizon) break;
    if (d.filter.matches(ev)) times.push_back(ev.at.value());
  }

  const double window_s = to_seconds(d.window);
  const double threshold = d.multiplier * d.base_rate_per_s;
  int streak = 0;
  // Bin ends at i*bin for i = 1, 2, ...; the last bin must fit inside the
  // horizon. Multiplying instead of accumulating keeps bin ends exact.
  for (std::int64_t i = 1;; ++i) {
    const double end = d.bin.value() * static_cast<double>(i);
    if (end > trace.horizon.value()) break;
    const double lo = end - d.window.value();
    // Window is (end - window, end]: count real events inside it.
    const auto first = std::upper_bound(times.begin(), times.end(), lo);
    const auto last = std::upper_bound(times.begin(), times.end(), end);
    double count = static_cast<double>(last - first);
    // Synthetic baseline before t = 0 fills the part of the window that
    // predates the trace.
    if (d.baseline_warmup && lo < 0.0)
      count += d.base_rate_per_s * (-lo) / kUnitsPerSecond;
    const double rate = count / window_s;
    if (rate > threshold) {
      if (++streak == d.consecutive_bins) return Verdict{true, Time(end)};
    } else {
      streak = 0;
    }
  }
  return Verdict{};
}

}  // namespace covertsim
