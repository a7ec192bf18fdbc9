#include "covertsim/actor.hpp"

#include "covertsim/engine.hpp"
#include "covertsim/errors.hpp"

namespace covertsim {

void ActorContext::send(const ActorName& next_hop, Message msg) {
  tasks_.push_back(Task{next_hop, std::move(msg)});
}

Monitor& ActorContext::monitor() { return sim_.monitor(); }

void Actor::on_message(const Message& msg, ActorContext& ctx) {
  // Tolerant default: unmatched messages are dropped and counted.
  (void)msg;
  ctx.mark_unmatched();
}

void Actor::on_timer(Timer& timer, ActorContext& ctx) {
  (void)ctx;
  throw ConfigurationError("actor '" + name_ + "' has no rule for timer '" +
                           timer.name + "'");
}

Time Actor::next_timer_expiry() const {
  Time best = Time::infinity();
  for (const auto& t : timers_)
    if (t->armed() && t->remaining < best) best = t->remaining;
  return best;
}

Timer& Actor::add_timer(std::string name) {
  timers_.push_back(std::make_unique<Timer>());
  timers_.back()->name = std::move(name);
  return *timers_.back();
}

}  // namespace covertsim
