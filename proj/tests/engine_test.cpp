#include <doctest.h>

#include <memory>
#include <string>
#include <vector>

#include "covertsim/engine.hpp"
#include "covertsim/errors.hpp"

using namespace covertsim;

namespace {

// Records every message it sees, with arrival times, into the observer.
class Sink : public Actor {
public:
  explicit Sink(ActorName name) : Actor(std::move(name), "sink") {}

  void on_message(const Message& msg, ActorContext& ctx) override {
    ctx.monitor().record(ctx.now(), "recv:" + msg.src,
                         static_cast<double>(msg.size_bytes));
  }
};

// Sends `count` messages to `to` when its timer fires, then stays quiet.
class Burst : public Actor {
public:
  Burst(ActorName name, ActorName to, int count, Time at)
      : Actor(std::move(name), "burst"), to_(std::move(to)), count_(count) {
    add_timer("burst").arm(at);
  }

  void on_timer(Timer& timer, ActorContext& ctx) override {
    for (int i = 0; i < count_; ++i) {
      Message m{MsgKind::dns_query, name(), to_,
                static_cast<std::uint64_t>(i + 1), std::monostate{}};
      ctx.send(to_, std::move(m));
    }
    timer.disarm();
  }

private:
  ActorName to_;
  int count_;
};

// Periodic ticker that records each firing.
class Ticker : public Actor {
public:
  Ticker(ActorName name, Time first, Time period, int stop_after)
      : Actor(std::move(name), "ticker"), period_(period), stop_(stop_after) {
    add_timer("tick").arm(first);
  }

  void on_timer(Timer& timer, ActorContext& ctx) override {
    ctx.monitor().record(ctx.now(), "tick");
    if (++fired_ >= stop_) {
      timer.disarm();
      return;
    }
    timer.arm(period_);
  }

private:
  Time period_;
  int stop_;
  int fired_ = 0;
};

std::vector<MonitorEvent> events_with_tag(Simulation& sim,
                                          const std::string& tag) {
  std::vector<MonitorEvent> out;
  for (const auto& ev : sim.monitor().events()) {
    if (ev.tag == tag) out.push_back(ev);
  }
  return out;
}

}  // namespace

TEST_CASE("equal-time messages deliver in emission order") {
  Simulation sim(1);
  sim.add_actor(std::make_unique<Burst>("src", "dst", 5, Time(10.0)));
  sim.add_actor(std::make_unique<Sink>("dst"));
  sim.add_link(Link{"src", "dst", Distribution::constant(2.0), 0.0});
  sim.run();

  const auto recv = events_with_tag(sim, "recv:src");
  REQUIRE(recv.size() == 5);
  for (std::size_t i = 0; i < recv.size(); ++i) {
    CHECK(recv[i].at == Time(12.0));
    // size_bytes 1..5 encodes emission order
    CHECK(recv[i].value == static_cast<double>(i + 1));
  }
}

TEST_CASE("the clock lands exactly on scheduled delivery instants") {
  Simulation sim(1);
  sim.add_actor(std::make_unique<Burst>("src", "dst", 1, Time(0.125)));
  sim.add_actor(std::make_unique<Sink>("dst"));
  sim.add_link(Link{"src", "dst", Distribution::constant(0.375), 0.0});
  sim.run();
  const auto recv = events_with_tag(sim, "recv:src");
  REQUIRE(recv.size() == 1);
  CHECK(recv[0].at.value() == 0.5);  // exact, no float drift
}

TEST_CASE("timers fire on schedule and re-arm relative to now") {
  Simulation sim(1);
  sim.add_actor(std::make_unique<Ticker>("t", Time(3.0), Time(7.0), 4));
  const Time end = sim.run();
  const auto ticks = events_with_tag(sim, "tick");
  REQUIRE(ticks.size() == 4);
  CHECK(ticks[0].at == Time(3.0));
  CHECK(ticks[1].at == Time(10.0));
  CHECK(ticks[2].at == Time(17.0));
  CHECK(ticks[3].at == Time(24.0));
  CHECK(end == Time(24.0));
}

TEST_CASE("the horizon cuts the run even with work pending") {
  Simulation sim(1);
  sim.add_actor(std::make_unique<Ticker>("t", Time(5.0), Time(5.0), 1000));
  const Time end = sim.run(Time(17.0));
  CHECK(end == Time(17.0));
  CHECK(events_with_tag(sim, "tick").size() == 3);  // 5, 10, 15
}

TEST_CASE("message accounting: sent = delivered + lost") {
  SUBCASE("loss-free") {
    Simulation sim(7);
    sim.add_actor(std::make_unique<Burst>("src", "dst", 50, Time(1.0)));
    sim.add_actor(std::make_unique<Sink>("dst"));
    sim.add_link(Link{"src", "dst", Distribution::constant(1.0), 0.0});
    sim.run();
    CHECK(sim.sent_count() == 50);
    CHECK(sim.delivered_count() == 50);
    CHECK(sim.lost_count() == 0);
  }
  SUBCASE("certain loss") {
    Simulation sim(7);
    sim.add_actor(std::make_unique<Burst>("src", "dst", 50, Time(1.0)));
    sim.add_actor(std::make_unique<Sink>("dst"));
    sim.add_link(Link{"src", "dst", Distribution::constant(1.0), 1.0});
    sim.run();
    CHECK(sim.sent_count() == 50);
    CHECK(sim.delivered_count() == 0);
    CHECK(sim.lost_count() == 50);
  }
  SUBCASE("partial loss still conserves") {
    Simulation sim(7);
    sim.add_actor(std::make_unique<Burst>("src", "dst", 200, Time(1.0)));
    sim.add_actor(std::make_unique<Sink>("dst"));
    sim.add_link(Link{"src", "dst", Distribution::constant(1.0), 0.3});
    sim.run();
    CHECK(sim.sent_count() == 200);
    CHECK(sim.delivered_count() + sim.lost_count() == 200);
    CHECK(sim.lost_count() > 20);
    CHECK(sim.lost_count() < 120);
  }
}

TEST_CASE("identical seeds replay the identical run") {
  auto run_once = [](std::uint64_t seed) {
    Simulation sim(seed);
    sim.add_actor(std::make_unique<Burst>("src", "dst", 30, Time(1.0)));
    sim.add_actor(std::make_unique<Sink>("dst"));
    sim.add_link(Link{"src", "dst",
                      Distribution::normal_truncated(5.0, 2.0), 0.2});
    sim.run();
    std::vector<double> times;
    for (const auto& ev : sim.monitor().events()) times.push_back(ev.at.value());
    return times;
  };
  CHECK(run_once(11) == run_once(11));
  CHECK(run_once(11) != run_once(12));
}

TEST_CASE("sending over an unregistered hop fails loudly") {
  Simulation sim(1);
  sim.add_actor(std::make_unique<Burst>("src", "dst", 1, Time(1.0)));
  sim.add_actor(std::make_unique<Sink>("dst"));
  CHECK_THROWS_AS(sim.run(), ConfigurationError);
}

TEST_CASE("messages nobody handles are counted, not dropped silently") {
  // Burst targets a plain Actor with the default message rule.
  Simulation sim(1);
  sim.add_actor(std::make_unique<Burst>("src", "dst", 3, Time(1.0)));
  sim.add_actor(std::make_unique<Actor>("dst", "inert"));
  sim.add_link(Link{"src", "dst", Distribution::constant(1.0), 0.0});
  sim.run();
  CHECK(sim.delivered_count() == 3);
  CHECK(sim.unmatched_count() == 3);
}

TEST_CASE("duplicate actors and bad links are configuration errors") {
  Simulation sim(1);
  sim.add_actor(std::make_unique<Sink>("a"));
  CHECK_THROWS_AS(sim.add_actor(std::make_unique<Sink>("a")),
                  ConfigurationError);
  sim.add_actor(std::make_unique<Sink>("b"));
  CHECK_THROWS_AS(
      sim.add_link(Link{"a", "nosuch", Distribution::constant(0.0), 0.0}),
      ConfigurationError);
  CHECK_THROWS_AS(
      sim.add_link(Link{"a", "b", Distribution::constant(0.0), 1.5}),
      ConfigurationError);
  sim.add_link(Link{"a", "b", Distribution::constant(0.0), 0.0});
  CHECK_THROWS_AS(
      sim.add_link(Link{"a", "b", Distribution::constant(0.0), 0.0}),
      ConfigurationError);
}

TEST_CASE("final_action runs once at the end of the run") {
  Simulation sim(1);
  sim.add_actor(std::make_unique<Ticker>("t", Time(1.0), Time(1.0), 3));
  int calls = 0;
  sim.hooks().final_action = [&](Simulation& s) {
    ++calls;
    s.observer().summary["done_at"] = s.now().value();
  };
  sim.run();
  CHECK(calls == 1);
  CHECK(sim.observer().summary.at("done_at") == 3.0);
}

TEST_CASE("send hook sees drops, arrival hook only deliveries") {
  Simulation sim(3);
  sim.add_actor(std::make_unique<Burst>("src", "dst", 100, Time(1.0)));
  sim.add_actor(std::make_unique<Sink>("dst"));
  sim.add_link(Link{"src", "dst", Distribution::constant(1.0), 0.5});
  std::uint64_t sends = 0, arrivals = 0;
  sim.hooks().on_send = [&](Time, const DelayedMessage&) { ++sends; };
  sim.hooks().on_arrival = [&](Time, const DelayedMessage&) { ++arrivals; };
  sim.run();
  CHECK(sends == 100);
  CHECK(arrivals == sim.delivered_count());
  CHECK(arrivals < 100);
}
