#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "covertsim/message.hpp"
#include "covertsim/random.hpp"
#include "covertsim/time.hpp"

namespace covertsim {

class Simulation;
class Monitor;

// Countdown timer owned by an actor. remaining = infinity means disarmed;
// it counts down as the clock advances and the owning actor's on_timer runs
// when it hits zero. The handler must re-arm or disarm it.
struct Timer {
  std::string name;
  Time remaining = Time::infinity();
  Time period = Time::zero();   // convention slot for periodic timers
  std::uint64_t data = 0;       // opaque payload, e.g. a chunk ordinal

  bool armed() const { return remaining.is_finite(); }
  void arm(Time in) { remaining = in; }
  void disarm() { remaining = Time::infinity(); }
};

// Side-effect channel handed to rules. Sends are collected as scheduling
// tasks; the engine resolves links, applies loss/delay and fires hooks after
// the rule returns, so a rule firing mutates exactly one actor.
class ActorContext {
public:
  ActorContext(Simulation& sim, RandomStream& stream, Time now)
      : sim_(sim), stream_(stream), now_(now) {}

  Time now() const { return now_; }
  RandomStream& stream() { return stream_; }

  void send(const ActorName& next_hop, Message msg);

  Monitor& monitor();

  // Called by the default message rule; the engine counts the drop.
  void mark_unmatched() { unmatched_ = true; }

private:
  friend class Simulation;
  struct Task {
    ActorName to;
    Message msg;
  };

  Simulation& sim_;
  RandomStream& stream_;
  Time now_;
  std::vector<Task> tasks_;
  bool unmatched_ = false;
};

class Actor {
public:
  Actor(ActorName name, std::string actor_class)
      : name_(std::move(name)), class_(std::move(actor_class)) {}
  virtual ~Actor() = default;

  const ActorName& name() const { return name_; }
  const std::string& actor_class() const { return class_; }

  // Message rule. Default drops the message; the engine logs the drop.
  virtual void on_message(const Message& msg, ActorContext& ctx);

  // Timer rule. Default raises: a firing timer with no rule is a model bug.
  virtual void on_timer(Timer& timer, ActorContext& ctx);

  // Earliest armed expiry across this actor's timers.
  Time next_timer_expiry() const;

protected:
  // Stable reference for the actor's lifetime; timers may be added while
  // the simulation runs.
  Timer& add_timer(std::string name);

private:
  friend class Simulation;

  ActorName name_;
  std::string class_;
  std::vector<std::unique_ptr<Timer>> timers_;
};

}  // namespace covertsim
