#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "covertsim/errors.hpp"
#include "covertsim/properties.hpp"
#include "covertsim/tunnel/config.hpp"
#include "covertsim/tunnel/scenario.hpp"

using namespace covertsim;
using namespace covertsim::tunnel;

namespace {

// Small, fast exfiltration setup: 2 files x 300 B in 100 B chunks, light
// background, zero loss unless a test says otherwise.
TunnelConfig tiny() {
  TunnelConfig c;
  c.name = "tiny";
  c.stop_time = 30'000.0;
  c.observation_horizon = 10'000.0;
  c.num_files = 2;
  c.total_bytes = 600;
  c.chunk_size = 100;
  c.num_generators = 4;
  c.gen_mean_wait = 500.0;
  c.gen_sd_wait = 100.0;
  c.mean_wait = 200.0;
  c.sd_wait = 20.0;
  c.link_delay = Distribution::normal_truncated(20.0, 4.0);
  return c;
}

std::uint64_t count_clean(const RunRecord& r, MsgKind kind, Direction dir) {
  std::uint64_t n = 0;
  for (const auto& ev : r.trace.events) {
    if (ev.kind == kind && ev.direction == dir) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("chunk planning: 1600 B at 100 B chunks and a 0.5 split") {
  const auto chunks = plan_chunks(1600, 100, 0.5);
  REQUIRE(chunks.size() == 16);
  std::uint64_t total = 0;
  int query = 0, request = 0;
  for (const auto& c : chunks) {
    CHECK(c.bytes == 100);
    total += c.bytes;
    (c.channel == Channel::query ? query : request) += 1;
  }
  CHECK(total == 1600);
  CHECK(query == 8);
  CHECK(request == 8);
  // Interleaved, starting with the control channel.
  CHECK(chunks[0].channel == Channel::query);
  CHECK(chunks[1].channel == Channel::request);
  CHECK(chunks[14].channel == Channel::query);
  CHECK(chunks[15].channel == Channel::request);
}

TEST_CASE("chunk planning edge shapes") {
  SUBCASE("no control share means one channel only") {
    const auto chunks = plan_chunks(1000, 100, 0.0);
    REQUIRE(chunks.size() == 10);
    for (const auto& c : chunks) CHECK(c.channel == Channel::request);
  }
  SUBCASE("all control") {
    const auto chunks = plan_chunks(250, 100, 1.0);
    REQUIRE(chunks.size() == 3);
    for (const auto& c : chunks) CHECK(c.channel == Channel::query);
    CHECK(chunks[2].bytes == 50);
  }
  SUBCASE("uneven tail bytes land on the last chunk of each channel") {
    // 101 B: control rounds to 51 (one 51 B query chunk), data 50 (one
    // 50 B request chunk).
    const auto chunks = plan_chunks(101, 100, 0.5);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].channel == Channel::query);
    CHECK(chunks[0].bytes == 51);
    CHECK(chunks[1].channel == Channel::request);
    CHECK(chunks[1].bytes == 50);
  }
  SUBCASE("bytes are conserved for awkward sizes") {
    for (std::uint64_t size : {1ULL, 99ULL, 150ULL, 333ULL, 1601ULL}) {
      std::uint64_t total = 0;
      for (const auto& c : plan_chunks(size, 100, 0.5)) total += c.bytes;
      CHECK(total == size);
    }
  }
}

TEST_CASE("file sizes split near-evenly with the remainder up front") {
  TunnelConfig c = tiny();
  c.num_files = 10;
  c.total_bytes = 57'509;
  const auto sizes = c.effective_file_sizes();
  REQUIRE(sizes.size() == 10);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    total += sizes[i];
    CHECK(sizes[i] == (i < 9 ? 5751 : 5750));
  }
  CHECK(total == 57'509);
}

TEST_CASE("explicit file sizes win over the even split") {
  TunnelConfig c = tiny();
  c.num_files = 2;
  c.file_sizes = {100, 500};
  c.total_bytes = 0;
  CHECK(c.effective_file_sizes() == std::vector<std::uint64_t>{100, 500});
}

TEST_CASE("config validation catches the usual mistakes") {
  auto bad = tiny();
  bad.loss_alice = 1.2;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);

  bad = tiny();
  bad.num_files = 3;
  bad.total_bytes = 0;
  bad.file_sizes.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);

  bad = tiny();
  bad.observation_horizon = bad.stop_time + 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);

  bad = tiny();
  bad.control_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);

  bad = tiny();
  bad.file_sizes = {100};  // length mismatch with num_files = 2
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);

  bad = tiny();
  bad.chunk_size = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigurationError);
}

TEST_CASE("defaults derive sensibly") {
  TunnelConfig c = tiny();
  CHECK(c.effective_observation_horizon() == Time(10'000.0));
  c.observation_horizon = 0.0;
  CHECK(c.effective_observation_horizon() == Time(c.stop_time));
  // 4 x one-hop mean of 20 ms x 2 hops = 160 ms.
  CHECK(c.effective_retransmit_timeout() == Time(160.0));
  c.retransmit_timeout = 999.0;
  CHECK(c.effective_retransmit_timeout() == Time(999.0));
}

TEST_CASE("loss-free transfers complete with no retransmissions") {
  const auto cfg = tiny();
  const auto r = run_tunnel(cfg, WorldKind::hcs, 42);
  CHECK(r.files_configured == 2);
  CHECK(r.files_acked == 2);
  CHECK(r.bytes_acked == 600);
  CHECK_FALSE(r.gave_up);
  CHECK(r.delivered_all());

  // Each file is 300 B -> 2 query + 2 request chunks; freshly received
  // chunks are monitored once each, and with zero loss nothing repeats.
  std::size_t received = 0;
  for (const auto& ev : r.monitor) {
    if (ev.tag == kTagChunkReceived) ++received;
  }
  CHECK(received == 8);

  // The boundary tap saw Alice's chunks among the egress queries.
  CHECK(count_clean(r, MsgKind::dns_query, Direction::egress) >= 4);
  CHECK(count_clean(r, MsgKind::https_request, Direction::egress) >= 4);
}

TEST_CASE("the ordinary world ignores the covert configuration") {
  const auto cfg = tiny();
  const auto r = run_tunnel(cfg, WorldKind::ordinary, 42);
  CHECK(r.files_acked == 0);
  CHECK(r.bytes_acked == 0);
  for (const auto& ev : r.monitor) {
    CHECK(ev.tag != kTagExfilStart);
    CHECK(ev.tag != kTagFileAcked);
  }
}

TEST_CASE("a null covert payload makes the worlds byte-identical") {
  auto cfg = tiny();
  cfg.num_files = 0;
  cfg.total_bytes = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto ord = run_tunnel(cfg, WorldKind::ordinary, seed);
    const auto hcs = run_tunnel(cfg, WorldKind::hcs, seed);
    REQUIRE(ord.trace.events.size() == hcs.trace.events.size());
    for (std::size_t i = 0; i < ord.trace.events.size(); ++i) {
      const auto& a = ord.trace.events[i];
      const auto& b = hcs.trace.events[i];
      CHECK(a.at == b.at);  // bit-identical times
      CHECK(a.kind == b.kind);
      CHECK(a.direction == b.direction);
      CHECK(a.size_bytes == b.size_bytes);
    }
  }
}

TEST_CASE("transfers survive boundary loss through retransmission") {
  auto cfg = tiny();
  cfg.loss_alice = 0.05;
  cfg.loss_bob = 0.05;
  cfg.stop_time = 60'000.0;
  cfg.observation_horizon = 0.0;
  int complete = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = run_tunnel(cfg, WorldKind::hcs, seed);
    CHECK_FALSE(r.gave_up);
    if (r.delivered_all()) ++complete;
  }
  CHECK(complete == 10);
}

TEST_CASE("files are acknowledged strictly in order") {
  auto cfg = tiny();
  cfg.loss_alice = 0.1;
  cfg.loss_bob = 0.1;
  cfg.stop_time = 120'000.0;
  const auto r = run_tunnel(cfg, WorldKind::hcs, 7);
  std::vector<double> acked_bytes;
  for (const auto& ev : r.monitor) {
    if (ev.tag == kTagFileAcked) acked_bytes.push_back(ev.value);
  }
  REQUIRE(acked_bytes.size() == 2);
  CHECK(acked_bytes[0] == 300.0);
  CHECK(acked_bytes[1] == 300.0);
}

TEST_CASE("a hopeless channel gives up instead of spinning forever") {
  auto cfg = tiny();
  cfg.loss_bob = 1.0;  // nothing ever reaches the receiver
  cfg.retransmit_cap = 3;
  cfg.stop_time = 30'000.0;
  const auto r = run_tunnel(cfg, WorldKind::hcs, 1);
  CHECK(r.gave_up);
  CHECK(r.files_acked == 0);
}

TEST_CASE("generators split query/request with the odd one on query") {
  auto cfg = tiny();
  cfg.num_files = 0;
  cfg.total_bytes = 0;
  cfg.num_generators = 5;  // 3 query-type, 2 request-type
  cfg.stop_time = 60'000.0;
  const auto r = run_tunnel(cfg, WorldKind::ordinary, 9);
  const auto dns = count_clean(r, MsgKind::dns_query, Direction::egress);
  const auto https = count_clean(r, MsgKind::https_request, Direction::egress);
  // ~120 vs ~80 expected; the gap is far wider than the noise.
  CHECK(dns > https + 15);
}

TEST_CASE("the trace is time-ordered and capped by the horizon") {
  const auto r = run_tunnel(tiny(), WorldKind::hcs, 4);
  CHECK(r.trace.horizon == Time(30'000.0));
  for (std::size_t i = 1; i < r.trace.events.size(); ++i) {
    CHECK(r.trace.events[i - 1].at <= r.trace.events[i].at);
  }
  for (const auto& ev : r.trace.events) {
    CHECK(ev.at <= r.trace.horizon);
  }
}

TEST_CASE("every egress event is corporate-side, ingress public-side") {
  const auto r = run_tunnel(tiny(), WorldKind::hcs, 4);
  for (const auto& ev : r.trace.events) {
    if (ev.direction == Direction::egress) {
      CHECK(ev.source == SourceClass::corporate);
    } else {
      CHECK(ev.source == SourceClass::public_side);
    }
  }
}
