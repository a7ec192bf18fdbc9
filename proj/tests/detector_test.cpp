#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "covertsim/detector.hpp"
#include "covertsim/errors.hpp"
#include "covertsim/random.hpp"
#include "covertsim/trace.hpp"

using namespace covertsim;

namespace {

ObservableEvent ev(double at, MsgKind kind = MsgKind::dns_query,
                   Direction dir = Direction::egress,
                   std::uint64_t size = 64) {
  return ObservableEvent{Time(at), kind, dir,
                         dir == Direction::egress ? SourceClass::corporate
                                                  : SourceClass::public_side,
                         size};
}

ObservableTrace make_trace(std::vector<ObservableEvent> events,
                           double horizon) {
  ObservableTrace t;
  t.horizon = Time(horizon);
  for (auto& e : events) t.append(e);
  return t;
}

// Naive re-scan oracle for the cumulative detector: walk the trace, count
// matches, alarm on the event that pushes the count past the threshold.
Verdict naive_cumulative(const CumulativeCountDetector& d,
                         const ObservableTrace& trace) {
  std::uint64_t seen = 0;
  for (const auto& e : trace.events) {
    if (e.at > trace.horizon) continue;
    if (e.kind != d.filter.kind || e.direction != d.filter.direction) continue;
    ++seen;
    if (seen > d.threshold) return Verdict{true, e.at};
  }
  return Verdict{};
}

// Naive re-scan oracle for the moving-average detector: for every bin end,
// recount the trailing window from scratch.
Verdict naive_moving_average(const MovingAverageRateDetector& d,
                             const ObservableTrace& trace) {
  int streak = 0;
  for (std::int64_t i = 1;; ++i) {
    const double end = d.bin.value() * static_cast<double>(i);
    if (end > trace.horizon.value()) break;
    const double lo = end - d.window.value();
    double count = 0.0;
    for (const auto& e : trace.events) {
      if (e.at > trace.horizon) continue;
      if (e.kind != d.filter.kind || e.direction != d.filter.direction)
        continue;
      if (e.at.value() > lo && e.at.value() <= end) count += 1.0;
    }
    if (d.baseline_warmup && lo < 0.0)
      count += d.base_rate_per_s * (-lo) / kUnitsPerSecond;
    const double rate = count / (d.window.value() / kUnitsPerSecond);
    if (rate > d.multiplier * d.base_rate_per_s) {
      if (++streak == d.consecutive_bins) return Verdict{true, Time(end)};
    } else {
      streak = 0;
    }
  }
  return Verdict{};
}

ObservableTrace random_trace(RandomStream& rng, double horizon,
                             int max_events) {
  const int n = static_cast<int>(rng.next_int(0, max_events));
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    times.push_back(rng.next_unit() * horizon * 1.1);  // some past horizon
  std::sort(times.begin(), times.end());
  ObservableTrace t;
  t.horizon = Time(horizon);
  for (double at : times) {
    const auto kind =
        rng.next_unit() < 0.6 ? MsgKind::dns_query : MsgKind::https_request;
    const auto dir =
        rng.next_unit() < 0.7 ? Direction::egress : Direction::ingress;
    t.append(ev(at, kind, dir));
  }
  return t;
}

}  // namespace

TEST_CASE("traces reject out-of-order appends and truncate to prefixes") {
  ObservableTrace t;
  t.horizon = Time(100.0);
  t.append(ev(10.0));
  t.append(ev(10.0));  // ties are fine
  t.append(ev(20.0));
  CHECK_THROWS_AS(t.append(ev(5.0)), InternalError);

  const ObservableTrace cut = t.truncated(Time(10.0));
  CHECK(cut.events.size() == 2);
  CHECK(cut.horizon == Time(10.0));
  // Truncation never extends the horizon.
  const ObservableTrace wide = t.truncated(Time(500.0));
  CHECK(wide.horizon == Time(100.0));
  CHECK(wide.events.size() == 3);
}

TEST_CASE("boundary tap records only relay-peer crossings") {
  const BoundaryObserver tap("relay", {"dns-service", "web-service"});
  ObservableTrace trace;
  trace.horizon = Time(1000.0);

  auto hop = [](const char* from, const char* to, MsgKind kind) {
    return DelayedMessage{Message{kind, from, to, 64, {}}, from, to,
                          Time(0.0), 0};
  };

  // Outbound relay -> public service: egress, seen at emission.
  tap.on_send(Time(1.0), hop("relay", "dns-service", MsgKind::dns_query),
              trace);
  // Internal hop alice -> relay: invisible in both hooks.
  tap.on_send(Time(2.0), hop("alice", "relay", MsgKind::dns_query), trace);
  tap.on_arrival(Time(2.5), hop("alice", "relay", MsgKind::dns_query), trace);
  // Service reply arriving at the relay: ingress, seen at arrival.
  tap.on_arrival(Time(3.0),
                 hop("dns-service", "relay", MsgKind::dns_response), trace);
  // The same reply seen at emission is not yet at the tap.
  tap.on_send(Time(2.8), hop("dns-service", "relay", MsgKind::dns_response),
              trace);
  // Public-side hop beyond the services: invisible.
  tap.on_send(Time(4.0), hop("dns-service", "bob", MsgKind::dns_query), trace);
  tap.on_arrival(Time(4.5), hop("dns-service", "bob", MsgKind::dns_query),
                 trace);

  REQUIRE(trace.events.size() == 2);
  CHECK(trace.events[0].direction == Direction::egress);
  CHECK(trace.events[0].source == SourceClass::corporate);
  CHECK(trace.events[0].at == Time(1.0));
  CHECK(trace.events[1].direction == Direction::ingress);
  CHECK(trace.events[1].source == SourceClass::public_side);
  CHECK(trace.events[1].kind == MsgKind::dns_response);
}

TEST_CASE("cumulative count alarms on the crossing event") {
  const auto trace = make_trace(
      {ev(1.0), ev(2.0), ev(3.0), ev(4.0), ev(5.0)}, 100.0);

  SUBCASE("threshold 3 alarms on the fourth matching event") {
    const CumulativeCountDetector d{"c", {}, 3};
    const Verdict v = run_detector(d, trace);
    CHECK(v.alarmed);
    CHECK(v.alarm_at == Time(4.0));
  }
  SUBCASE("a threshold the trace never crosses stays quiet") {
    const CumulativeCountDetector d{"c", {}, 5};
    const Verdict v = run_detector(d, trace);
    CHECK_FALSE(v.alarmed);
    CHECK(v.alarm_at == Time::infinity());
  }
  SUBCASE("threshold 0 alarms on the first event") {
    const CumulativeCountDetector d{"c", {}, 0};
    const Verdict v = run_detector(d, trace);
    CHECK(v.alarmed);
    CHECK(v.alarm_at == Time(1.0));
  }
  SUBCASE("events past the horizon do not count") {
    const auto short_trace = trace.truncated(Time(3.5));
    const CumulativeCountDetector d{"c", {}, 2};
    CHECK(run_detector(d, short_trace).alarmed);
    const CumulativeCountDetector d3{"c", {}, 3};
    CHECK_FALSE(run_detector(d3, short_trace).alarmed);
  }
}

TEST_CASE("the event filter is strict about kind and direction") {
  const auto trace = make_trace(
      {ev(1.0, MsgKind::dns_query, Direction::egress),
       ev(2.0, MsgKind::https_request, Direction::egress),
       ev(3.0, MsgKind::dns_query, Direction::ingress),
       ev(4.0, MsgKind::dns_query, Direction::egress)},
      10.0);

  const CumulativeCountDetector d{
      "c", EventFilter{MsgKind::dns_query, Direction::egress}, 1};
  const Verdict v = run_detector(d, trace);
  // Only events 1 and 4 match; the second match crosses threshold 1.
  CHECK(v.alarmed);
  CHECK(v.alarm_at == Time(4.0));
}

TEST_CASE("moving average on a hand-checked burst") {
  // 13 matching events inside (0, 10]; window 60 units, bin 10 units.
  // Every window that reaches back into the burst counts all 13 events:
  // rate = 13 / 0.06 s. With base 0.1/s and multiplier 2 the threshold is
  // 0.2/s, so bins ending at 10 and 20 both qualify; two consecutive
  // qualifying bins alarm at t = 20.
  std::vector<ObservableEvent> events;
  for (int i = 1; i <= 13; ++i)
    events.push_back(ev(10.0 * static_cast<double>(i) / 13.0));
  const auto trace = make_trace(std::move(events), 60.0);

  MovingAverageRateDetector d{"ma", {}, Time(60.0), Time(10.0), 2.0, 0.1, 2,
                              false};
  const Verdict v = run_detector(d, trace);
  CHECK(v.alarmed);
  CHECK(v.alarm_at == Time(20.0));

  SUBCASE("one more required bin pushes the alarm one bin later") {
    d.consecutive_bins = 3;
    const Verdict v3 = run_detector(d, trace);
    CHECK(v3.alarmed);
    CHECK(v3.alarm_at == Time(30.0));
  }
  SUBCASE("an unreachable multiplier never alarms") {
    d.multiplier = 1e7;
    CHECK_FALSE(run_detector(d, trace).alarmed);
  }
}

TEST_CASE("baseline warmup feeds synthetic history before t = 0") {
  // Empty trace, window 60 s, bin 10 s, base 1/s. With warmup the window
  // ending at bin i still contains (60000 - end) / 1000 synthetic events:
  // rates 50/60, 40/60, 30/60 for the first three bins. A multiplier of
  // 0.4 keeps all three above threshold, so consecutive_bins = 3 alarms at
  // t = 30000 on pure startup credit; without warmup the trace is silent.
  ObservableTrace empty;
  empty.horizon = Time(60'000.0);

  MovingAverageRateDetector d{"ma", {}, Time(60'000.0), Time(10'000.0), 0.4,
                              1.0, 3, true};
  const Verdict v = run_detector(d, empty);
  CHECK(v.alarmed);
  CHECK(v.alarm_at == Time(30'000.0));

  d.baseline_warmup = false;
  CHECK_FALSE(run_detector(d, empty).alarmed);
}

TEST_CASE("moving average rejects degenerate geometry") {
  ObservableTrace empty;
  empty.horizon = Time(10.0);
  MovingAverageRateDetector d;
  d.window = Time(0.0);
  CHECK_THROWS_AS(run_detector(d, empty), ConfigurationError);
  d.window = Time(60.0);
  d.bin = Time(0.0);
  CHECK_THROWS_AS(run_detector(d, empty), ConfigurationError);
  d.bin = Time(10.0);
  d.consecutive_bins = 0;
  CHECK_THROWS_AS(run_detector(d, empty), ConfigurationError);
}

TEST_CASE("detectors agree with the naive re-scan on random traces") {
  RandomStream rng(20240513);
  int cumulative_alarms = 0;
  int ma_alarms = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto trace = random_trace(rng, 1000.0, 300);

    const CumulativeCountDetector cd{
        "c",
        EventFilter{MsgKind::dns_query, Direction::egress},
        static_cast<std::uint64_t>(rng.next_int(0, 40))};
    const Verdict fast = run_detector(cd, trace);
    const Verdict slow = naive_cumulative(cd, trace);
    CHECK(fast.alarmed == slow.alarmed);
    CHECK(fast.alarm_at == slow.alarm_at);
    cumulative_alarms += fast.alarmed ? 1 : 0;

    MovingAverageRateDetector md{
        "ma",
        EventFilter{MsgKind::dns_query, Direction::egress},
        Time(static_cast<double>(rng.next_int(50, 400))),
        Time(static_cast<double>(rng.next_int(10, 120))),
        0.5 + rng.next_unit() * 2.0,
        20.0 + rng.next_unit() * 100.0,
        static_cast<int>(rng.next_int(1, 3)),
        rng.next_unit() < 0.5};
    const Verdict mfast = run_detector(md, trace);
    const Verdict mslow = naive_moving_average(md, trace);
    CHECK(mfast.alarmed == mslow.alarmed);
    CHECK(mfast.alarm_at == mslow.alarm_at);
    ma_alarms += mfast.alarmed ? 1 : 0;
  }
  // The comparison only means something if both outcomes actually occur.
  CHECK(cumulative_alarms > 10);
  CHECK(cumulative_alarms < 100);
  CHECK(ma_alarms > 10);
  CHECK(ma_alarms < 100);
}

TEST_CASE("raising the knob never makes a detector more eager") {
  RandomStream rng(777);
  for (int trial = 0; trial < 40; ++trial) {
    const auto trace = random_trace(rng, 800.0, 250);

    CumulativeCountDetector cd{
        "c", EventFilter{MsgKind::dns_query, Direction::egress}, 0};
    Verdict prev = run_detector(cd, trace);
    for (std::uint64_t th : {2, 5, 11, 23}) {
      cd.threshold = th;
      const Verdict cur = run_detector(cd, trace);
      if (cur.alarmed) {
        CHECK(prev.alarmed);
        CHECK(prev.alarm_at <= cur.alarm_at);
      }
      prev = cur;
    }

    MovingAverageRateDetector md{
        "ma", EventFilter{MsgKind::dns_query, Direction::egress},
        Time(200.0), Time(40.0), 0.25, 50.0, 2, false};
    Verdict mprev = run_detector(md, trace);
    for (double mult : {0.5, 1.0, 2.0, 4.0}) {
      md.multiplier = mult;
      const Verdict cur = run_detector(md, trace);
      if (cur.alarmed) {
        CHECK(mprev.alarmed);
        CHECK(mprev.alarm_at <= cur.alarm_at);
      }
      mprev = cur;
    }
  }
}

TEST_CASE("detector names survive the variant") {
  const Detector a = CumulativeCountDetector{"dns-count", {}, 10};
  const Detector b = MovingAverageRateDetector{"dns-rate", {}};
  CHECK(detector_name(a) == "dns-count");
  CHECK(detector_name(b) == "dns-rate");
}
