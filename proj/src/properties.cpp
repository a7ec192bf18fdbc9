#include "covertsim/properties.hpp"

#include "covertsim/errors.hpp"

namespace covertsim {

const char* world_name(WorldKind w) {
  return w == WorldKind::ordinary ? "ordinary" : "hcs";
}

WorldKind world_from_name(const std::string& name) {
  if (name == "ordinary") return WorldKind::ordinary;
  if (name == "hcs") return WorldKind::hcs;
  throw ConfigurationError("unknown world: " + name);
}

const MonitorEvent* Monitor::first(const std::string& tag) const {
  for (const auto& ev : events_)
    if (ev.tag == tag) return &ev;
  return nullptr;
}

const MonitorEvent* Monitor::last(const std::string& tag) const {
  for (auto it = events_.rbegin(); it != events_.rend(); ++it)
    if (it->tag == tag) return &*it;
  return nullptr;
}

std::size_t Monitor::count(const std::string& tag) const {
  std::size_t n = 0;
  for (const auto& ev : events_)
    if (ev.tag == tag) ++n;
  return n;
}

double Monitor::sum_values(const std::string& tag) const {
  double s = 0.0;
  for (const auto& ev : events_)
    if (ev.tag == tag) s += ev.value;
  return s;
}

namespace {

const MonitorEvent* find_first(const RunRecord& run, const char* tag) {
  for (const auto& ev : run.monitor)
    if (ev.tag == tag) return &ev;
  return nullptr;
}

const MonitorEvent* find_last(const RunRecord& run, const char* tag) {
  const MonitorEvent* hit = nullptr;
  for (const auto& ev : run.monitor)
    if (ev.tag == tag) hit = &ev;
  return hit;
}

}  // namespace

PropertyValue latency(const RunRecord& run) {
  if (run.files_configured == 0 || run.gave_up || !run.delivered_all())
    return PropertyValue::discard();
  const MonitorEvent* start = find_first(run, kTagExfilStart);
  const MonitorEvent* last_ack = find_last(run, kTagFileAcked);
  if (start == nullptr || last_ack == nullptr)
    throw InternalError("delivered run lacks exfiltration monitor events");
  return PropertyValue::of((last_ack->at - start->at).value());
}

PropertyValue goodput(const RunRecord& run) {
  const PropertyValue lat = latency(run);
  if (lat.discarded || !(lat.value > 0.0)) return PropertyValue::discard();
  return PropertyValue::of(static_cast<double>(run.bytes_acked) /
                           (lat.value / kUnitsPerSecond));
}

PropertyValue op_duration(const RunRecord& run, const Detector& d,
                          Time horizon, OpOrigin origin) {
  const Verdict v = run_detector(d, run.trace.truncated(horizon));
  if (!v.alarmed) return PropertyValue::discard();
  if (origin == OpOrigin::run_start) return PropertyValue::of(v.alarm_at.value());
  const MonitorEvent* start = find_first(run, kTagExfilStart);
  if (start == nullptr) return PropertyValue::discard();
  return PropertyValue::of(v.alarm_at.value() - start->at.value());
}

PropertyValue alarm_indicator(const RunRecord& run, const Detector& d,
                              Time horizon) {
  const Verdict v = run_detector(d, run.trace.truncated(horizon));
  return PropertyValue::of(v.alarmed ? 1.0 : 0.0);
}

}  // namespace covertsim
