#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "covertsim/event_queue.hpp"
#include "covertsim/message.hpp"
#include "covertsim/time.hpp"

namespace covertsim {

// What a passive wire monitor at the network boundary can see: timing,
// message kind, direction and size. Payloads are invisible by design; the
// whole point of the audit is that detection must work from this view.

enum class Direction { egress, ingress };
enum class SourceClass { corporate, public_side };

const char* direction_name(Direction d);
Direction direction_from_name(const std::string& name);
const char* source_class_name(SourceClass s);
SourceClass source_class_from_name(const std::string& name);

struct ObservableEvent {
  Time at;
  MsgKind kind;
  Direction direction;
  SourceClass source;
  std::uint64_t size_bytes = 0;
};

struct ObservableTrace {
  std::vector<ObservableEvent> events;  // non-decreasing in time
  Time horizon = Time::zero();          // observation window end

  void append(ObservableEvent ev);

  // Prefix up to and including new_horizon.
  ObservableTrace truncated(Time new_horizon) const;

  // One record per line: time, kind, direction, source, size (tab-separated).
  void write_tsv(std::ostream& os) const;
};

// Boundary tap for a relay topology: messages the relay exchanges with its
// public-side peers are observable, everything else is internal. Egress is
// recorded at emission (before any loss further down the path, the way a
// tap next to the relay would see it), ingress at arrival (a lost message
// never reaches the tap).
class BoundaryObserver {
public:
  BoundaryObserver(ActorName relay, std::set<ActorName> public_peers)
      : relay_(std::move(relay)), public_peers_(std::move(public_peers)) {}

  // Feed from the engine's send/arrival hooks. Appends to trace when the
  // hop crosses the boundary.
  void on_send(Time at, const DelayedMessage& dm, ObservableTrace& trace) const;
  void on_arrival(Time at, const DelayedMessage& dm,
                  ObservableTrace& trace) const;

private:
  ActorName relay_;
  std::set<ActorName> public_peers_;
};

}  // namespace covertsim
