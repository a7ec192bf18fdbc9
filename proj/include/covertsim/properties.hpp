#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "covertsim/detector.hpp"
#include "covertsim/observer.hpp"
#include "covertsim/trace.hpp"
#include "covertsim/world.hpp"

namespace covertsim {

// Everything one simulated run leaves behind: the adversary-visible trace,
// the performance monitor log and the observer's end-of-run scalars.
// Detectors and properties are pure functions of this record, so archived
// records can be re-scored later with different detectors.
struct RunRecord {
  std::string scenario;
  WorldKind world = WorldKind::ordinary;
  std::uint64_t seed = 0;

  ObservableTrace trace;  // horizon = full run length
  std::vector<MonitorEvent> monitor;
  std::map<std::string, double> observer_summary;

  int files_configured = 0;
  int files_acked = 0;
  std::uint64_t bytes_acked = 0;
  // Retransmission cap exceeded for some chunk.
  bool gave_up = false;

  bool delivered_all() const {
    return files_configured > 0 && files_acked == files_configured;
  }
};

// Monitor tags written by the exfiltration scenario.
inline constexpr const char* kTagExfilStart = "exfil_start";
inline constexpr const char* kTagFileAcked = "file_acked";
inline constexpr const char* kTagChunkReceived = "chunk_received";

// A per-run sample: either a real value or a discard. Discards never enter
// the estimate; their count is reported next to it.
struct PropertyValue {
  bool discarded = false;
  double value = 0.0;

  static PropertyValue of(double v) { return PropertyValue{false, v}; }
  static PropertyValue discard() { return PropertyValue{true, 0.0}; }
};

// Where an operation-duration measurement starts counting from.
enum class OpOrigin { exfil_start, run_start };

// Time from first covert emission to the receipt for the last file, in
// time units. Discarded when no files are configured or delivery did not
// complete (cap exceeded or horizon hit first).
PropertyValue latency(const RunRecord& run);

// Delivered bytes per second over the latency span. Discarded with latency.
PropertyValue goodput(const RunRecord& run);

// Alarm time minus origin for one detector over the trace prefix up to
// `horizon`. Discarded when the detector never alarms (and, for the
// exfil_start origin, when there is no covert emission).
PropertyValue op_duration(const RunRecord& run, const Detector& d,
                          Time horizon, OpOrigin origin = OpOrigin::exfil_start);

// 1 when the detector alarms within the horizon, else 0. Never discarded.
PropertyValue alarm_indicator(const RunRecord& run, const Detector& d,
                              Time horizon);

}  // namespace covertsim
