#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "covertsim/actor.hpp"
#include "covertsim/distribution.hpp"
#include "covertsim/event_queue.hpp"
#include "covertsim/observer.hpp"
#include "covertsim/time.hpp"

namespace covertsim {

// Directional point-to-point link. Every hop an actor sends on must be
// registered; loss is decided per message, delay sampled per message from
// the link's own stream.
struct Link {
  ActorName from;
  ActorName to;
  Distribution delay = Distribution::constant(0.0);
  double loss = 0.0;
};

// Scenario taps. on_send fires once per emitted message before the loss
// decision (a wire tap at the sender side sees messages that are later
// dropped); on_arrival fires once per delivered message before the target
// rule runs. final_action runs when the run ends.
struct Hooks {
  std::function<void(Time, const DelayedMessage&)> on_send;
  std::function<void(Time, const DelayedMessage&)> on_arrival;
  std::function<void(Simulation&)> final_action;
};

// Discrete-event core: actors with timers, delayed messages, a virtual
// clock. Deterministic for a fixed root seed and initial configuration:
// equal-time messages deliver in insertion order, then due timers fire in
// actor registration order.
class Simulation {
public:
  explicit Simulation(std::uint64_t root_seed);

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Actor names must be unique; the actor's stream derives from
  // (root seed, "actor/<name>").
  Actor& add_actor(std::unique_ptr<Actor> actor);
  void add_link(Link link);

  Actor* find_actor(const ActorName& name);

  Hooks& hooks() { return hooks_; }
  Observer& observer() { return observer_; }
  Monitor& monitor() { return monitor_; }

  Time now() const { return clock_; }
  std::uint64_t root_seed() const { return root_seed_; }

  // Auxiliary stream keyed by (root seed, label); independent of all actor
  // and link streams.
  RandomStream derived_stream(std::string_view label) const;

  // Runs until no event is pending (every timer disarmed, queue empty) or
  // until the horizon, whichever is first, then runs final_action. Returns
  // the final clock.
  Time run(Time until = Time::infinity());

  // Counters for conservation checks: every emitted message is delivered
  // once or dropped once (link loss), plus messages no rule matched.
  std::uint64_t sent_count() const { return sent_; }
  std::uint64_t delivered_count() const { return delivered_; }
  std::uint64_t lost_count() const { return lost_; }
  std::uint64_t unmatched_count() const { return unmatched_; }
  void note_unmatched(const Message& msg, const ActorName& at);

private:
  friend class ActorContext;

  struct LinkState {
    Link link;
    RandomStream stream;
  };

  void flush_tasks(Actor& from, ActorContext& ctx);
  void deliver_due();
  bool fire_due_timers();
  Time next_event_time() const;

  std::uint64_t root_seed_;
  Time clock_ = Time::zero();
  EventQueue queue_;
  std::vector<std::unique_ptr<Actor>> actors_;  // registration order
  std::map<ActorName, Actor*> by_name_;
  std::map<ActorName, RandomStream> actor_streams_;
  std::map<std::pair<ActorName, ActorName>, LinkState> links_;
  Hooks hooks_;
  Observer observer_;
  Monitor monitor_;
  std::uint64_t sent_ = 0, delivered_ = 0, lost_ = 0, unmatched_ = 0;
  bool finished_ = false;
};

}  // namespace covertsim
