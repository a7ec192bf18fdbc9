#include "covertsim/engine.hpp"

#include "covertsim/errors.hpp"

namespace covertsim {

Simulation::Simulation(std::uint64_t root_seed) : root_seed_(root_seed) {}

Actor& Simulation::add_actor(std::unique_ptr<Actor> actor) {
  if (finished_) throw InternalError("add_actor after run()");
  const ActorName name = actor->name();
  if (by_name_.count(name))
    throw ConfigurationError("duplicate actor name: " + name);
  actors_.push_back(std::move(actor));
  Actor* raw = actors_.back().get();
  by_name_[name] = raw;
  actor_streams_.emplace(name, RandomStream(root_seed_, "actor/" + name));
  return *raw;
}

void Simulation::add_link(Link link) {
  if (!by_name_.count(link.from))
    throw ConfigurationError("link from unknown actor: " + link.from);
  if (!by_name_.count(link.to))
    throw ConfigurationError("link to unknown actor: " + link.to);
  if (!(link.loss >= 0.0 && link.loss <= 1.0))
    throw ConfigurationError("link loss must be in [0, 1]");
  if (link.delay.kind() == Distribution::Kind::uniform_int && link.delay.a() < 0)
    throw ConfigurationError("link delay must be non-negative");
  auto key = std::make_pair(link.from, link.to);
  if (links_.count(key))
    throw ConfigurationError("duplicate link: " + link.from + " -> " + link.to);
  RandomStream stream(root_seed_, "link/" + link.from + ">" + link.to);
  links_.emplace(std::move(key), LinkState{std::move(link), stream});
}

Actor* Simulation::find_actor(const ActorName& name) {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second;
}

RandomStream Simulation::derived_stream(std::string_view label) const {
  return RandomStream(root_seed_, std::string("aux/") += label);
}

void Simulation::note_unmatched(const Message& msg, const ActorName& at) {
  (void)msg;
  (void)at;
  ++unmatched_;
}

void Simulation::flush_tasks(Actor& from, ActorContext& ctx) {
  for (auto& task : ctx.tasks_) {
    auto it = links_.find(std::make_pair(from.name(), task.to));
    if (it == links_.end())
      throw ConfigurationError("no link " + from.name() + " -> " + task.to);
    LinkState& ls = it->second;

    DelayedMessage dm;
    dm.msg = std::move(task.msg);
    dm.from = from.name();
    dm.to = task.to;
    dm.deliver_at = clock_;  // emission instant; real delivery time set below
    ++sent_;
    if (hooks_.on_send) hooks_.on_send(clock_, dm);

    // One loss draw per message even at loss 0, so the delay sample
    // sequence does not depend on whether the link is configured lossy.
    if (ls.stream.next_bernoulli(ls.link.loss)) {
      ++lost_;
      continue;
    }
    const double delay = ls.link.delay.sample(ls.stream);
    if (delay < 0.0) throw InternalError("negative link delay sampled");
    dm.deliver_at = clock_ + Time(delay);
    queue_.push(std::move(dm));
  }
  ctx.tasks_.clear();
}

void Simulation::deliver_due() {
  while (!queue_.empty() && queue_.next_time() <= clock_) {
    DelayedMessage dm = queue_.pop();
    ++delivered_;
    if (hooks_.on_arrival) hooks_.on_arrival(clock_, dm);
    auto it = by_name_.find(dm.to);
    if (it == by_name_.end())
      throw InternalError("message for unknown actor: " + dm.to);
    Actor& target = *it->second;
    ActorContext ctx(*this, actor_streams_.at(dm.to), clock_);
    target.on_message(dm.msg, ctx);
    if (ctx.unmatched_) note_unmatched(dm.msg, dm.to);
    flush_tasks(target, ctx);
  }
}

bool Simulation::fire_due_timers() {
  bool fired = false;
  for (auto& actor : actors_) {
    // Rules may add timers while we iterate; index-based walk is safe.
    for (std::size_t i = 0; i < actor->timers_.size(); ++i) {
      Timer& t = *actor->timers_[i];
      if (!(t.armed() && t.remaining == Time::zero())) continue;
      ActorContext ctx(*this, actor_streams_.at(actor->name()), clock_);
      actor->on_timer(t, ctx);
      if (t.armed() && t.remaining == Time::zero())
        throw ConfigurationError("timer '" + t.name + "' of actor '" +
                                 actor->name() + "' was not rearmed");
      flush_tasks(*actor, ctx);
      fired = true;
    }
  }
  return fired;
}

Time Simulation::next_event_time() const {
  Time dt = Time::infinity();
  for (const auto& actor : actors_) dt = min(dt, actor->next_timer_expiry());
  if (!queue_.empty()) dt = min(dt, queue_.next_time() - clock_);
  return dt;
}

Time Simulation::run(Time until) {
  if (finished_) throw InternalError("run() called twice");
  for (;;) {
    // Drain the current instant: due messages in insertion order, then due
    // timers in actor registration order, repeated until quiescent (a rule
    // may schedule zero-delay work at the same instant).
    int guard = 0;
    for (;;) {
      const bool had_msgs = !queue_.empty() && queue_.next_time() <= clock_;
      if (had_msgs) deliver_due();
      const bool had_timers = fire_due_timers();
      if (!had_msgs && !had_timers) break;
      if (++guard > 1000000)
        throw InternalError("livelock: unbounded work at one virtual instant");
    }

    Time dt_timer = Time::infinity();
    for (const auto& actor : actors_)
      dt_timer = min(dt_timer, actor->next_timer_expiry());
    const Time dt_queue =
        queue_.empty() ? Time::infinity() : queue_.next_time() - clock_;
    const Time dt = min(dt_timer, dt_queue);

    if (dt.is_infinite()) break;  // nothing will ever happen again

    if (until.is_finite() && clock_ + dt > until) {
      // Horizon cut: advance to the horizon and stop.
      const Time step = until - clock_;
      for (auto& actor : actors_)
        for (auto& t : actor->timers_)
          if (t->armed())
            t->remaining = t->remaining <= step ? Time::zero()
                                                : t->remaining - step;
      clock_ = until;
      break;
    }

    // Jump exactly onto a message time when one is due; avoids float drift
    // between absolute queue times and relative timer countdowns.
    const Time new_clock =
        (dt_queue <= dt_timer) ? queue_.next_time() : clock_ + dt;
    for (auto& actor : actors_)
      for (auto& t : actor->timers_)
        if (t->armed())
          t->remaining =
              t->remaining <= dt ? Time::zero() : t->remaining - dt;
    clock_ = new_clock;
  }
  finished_ = true;
  if (hooks_.final_action) hooks_.final_action(*this);
  return clock_;
}

}  // namespace covertsim
