#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "covertsim/message.hpp"
#include "covertsim/time.hpp"

namespace covertsim {

// Passive measurement log filled by scenario hooks, read by the final
// action. `sent` collects (arrival time, message) pairs the scenario cares
// about; `summary` holds the derived scalars (mean round-trip time, entropy
// observables) written once at end of run.
struct Observer {
  std::vector<std::pair<Time, Message>> sent;
  std::map<std::string, double> summary;
};

// Performance event recorded by actor rules: exfiltration start, file
// receipts, embedded/extracted bytes. Tag vocabulary is scenario-owned.
struct MonitorEvent {
  Time at;
  std::string tag;
  double value = 0.0;
};

class Monitor {
public:
  void record(Time at, std::string tag, double value = 0.0) {
    events_.push_back(MonitorEvent{at, std::move(tag), value});
  }

  const std::vector<MonitorEvent>& events() const { return events_; }

  // First event with this tag, or nullptr.
  const MonitorEvent* first(const std::string& tag) const;
  const MonitorEvent* last(const std::string& tag) const;
  std::size_t count(const std::string& tag) const;
  double sum_values(const std::string& tag) const;

private:
  std::vector<MonitorEvent> events_;
};

}  // namespace covertsim
