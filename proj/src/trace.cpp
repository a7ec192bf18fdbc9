#include "covertsim/trace.hpp"

#include <ostream>

#include "covertsim/errors.hpp"

namespace covertsim {

const char* direction_name(Direction d) {
  return d == Direction::egress ? "egress" : "ingress";
}

Direction direction_from_name(const std::string& name) {
  if (name == "egress") return Direction::egress;
  if (name == "ingress") return Direction::ingress;
  throw ConfigurationError("unknown direction: " + name);
}

const char* source_class_name(SourceClass s) {
  return s == SourceClass::corporate ? "corporate" : "public";
}

SourceClass source_class_from_name(const std::string& name) {
  if (name == "corporate") return SourceClass::corporate;
  if (name == "public") return SourceClass::public_side;
  throw ConfigurationError("unknown source class: " + name);
}

void ObservableTrace::append(ObservableEvent ev) {
  if (!events.empty() && ev.at < events.back().at)
    throw InternalError("observable events must be appended in time order");
  events.push_back(ev);
}

ObservableTrace ObservableTrace::truncated(Time new_horizon) const {
  ObservableTrace out;
  out.horizon = min(horizon, new_horizon);
  for (const auto& ev : events) {
    if (ev.at > out.horizon) break;
    out.events.push_back(ev);
  }
  return out;
}

void ObservableTrace::write_tsv(std::ostream& os) const {
  for (const auto& ev : events) {
    os << ev.at.value() << '\t' << msg_kind_name(ev.kind) << '\t'
       << direction_name(ev.direction) << '\t' << source_class_name(ev.source)
       << '\t' << ev.size_bytes << '\n';
  }
}

void BoundaryObserver::on_send(Time at, const DelayedMessage& dm,
                               ObservableTrace& trace) const {
  if (dm.from != relay_ || !public_peers_.count(dm.to)) return;
  trace.append(ObservableEvent{at, dm.msg.kind, Direction::egress,
                               SourceClass::corporate, dm.msg.size_bytes});
}

void BoundaryObserver::on_arrival(Time at, const DelayedMessage& dm,
                                  ObservableTrace& trace) const {
  if (dm.to != relay_ || !public_peers_.count(dm.from)) return;
  trace.append(ObservableEvent{at, dm.msg.kind, Direction::ingress,
                               SourceClass::public_side, dm.msg.size_bytes});
}

}  // namespace covertsim
