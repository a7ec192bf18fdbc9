#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covertsim/detector.hpp"
#include "covertsim/distribution.hpp"
#include "covertsim/time.hpp"

namespace covertsim::tunnel {

// Exfiltration-over-tunnels scenario. A corporate network (traffic
// generators, and in the hcs world the insider Alice) sits behind a relay;
// public services answer queries and, unknowingly, forward covert chunks to
// the outside receiver Bob. All times in milliseconds.
struct TunnelConfig {
  std::string name = "custom";

  double stop_time = 60'000.0;
  // Detectors and audits look at the trace prefix up to this horizon;
  // 0 means "the whole run". Decoupled from stop_time so transfers can
  // finish (goodput defined) while detection is judged on a fixed window.
  double observation_horizon = 0.0;

  // Loss on the relay <-> services links and on the services <-> Bob links.
  double loss_alice = 0.0;
  double loss_bob = 0.0;

  // Covert payload: num_files files; sizes either explicit or a near-even
  // split of total_bytes. num_files = 0 disables the covert system even in
  // the hcs world (null configuration).
  int num_files = 0;
  std::uint64_t total_bytes = 0;
  std::vector<std::uint64_t> file_sizes;

  std::uint64_t chunk_size = 100;
  // Share of each file routed over the query channel (DNS-shaped); the
  // rest goes over the request channel (HTTPS-shaped).
  double control_fraction = 0.5;

  // Background generators, split evenly between query-type and
  // request-type (odd count: the extra one is query-type).
  int num_generators = 16;
  double gen_mean_wait = 1000.0;
  double gen_sd_wait = 250.0;

  // Alice's posting model: wait between successive covert chunk emissions.
  double mean_wait = 2000.0;
  double sd_wait = 500.0;

  Distribution link_delay = Distribution::normal_truncated(50.0, 10.0);

  // 0 means derive: 4 x mean one-way path delay (two hops each way).
  double retransmit_timeout = 0.0;
  int retransmit_cap = 50;

  std::vector<Detector> detectors;

  void validate() const;

  // Explicit sizes if given, else total_bytes split across num_files with
  // the remainder spread over the first files.
  std::vector<std::uint64_t> effective_file_sizes() const;

  Time effective_observation_horizon() const;
  Time effective_retransmit_timeout() const;
};

// Planned transmission unit: which channel a chunk uses and how many bytes
// it carries. Chunks alternate channels so both observable kinds carry
// signal throughout the transfer.
enum class Channel { query, request };

struct ChunkSpec {
  Channel channel;
  std::uint64_t bytes;
};

// ceil(control bytes / chunk) query chunks and ceil(data bytes / chunk)
// request chunks, interleaved. control bytes = round(fraction * size).
std::vector<ChunkSpec> plan_chunks(std::uint64_t file_bytes,
                                   std::uint64_t chunk_size,
                                   double control_fraction);

}  // namespace covertsim::tunnel
