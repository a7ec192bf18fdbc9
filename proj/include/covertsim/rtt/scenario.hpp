#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "covertsim/distribution.hpp"
#include "covertsim/time.hpp"

namespace covertsim::rtt {

// Round-trip measurement scenario. An initiator pings a responder every
// `period` units from start_time until stop_time; the responder echoes the
// request timestamp next to its own clock reading. In the covert variant
// the responder hides one byte per round in the low bits of its reading,
// XOR-masked with a keystream both ends derive from shared_seed.
struct RttParams {
  std::string name = "rtt";
  Time start_time{999.0};
  Time stop_time{10999.0};
  Time period{500.0};
  Distribution link_delay = Distribution::normal_truncated(50.0, 10.0);
  double link_loss = 0.0;
  std::uint64_t shared_seed = 0xC0FFEE;
};

struct RttRunResult {
  std::vector<double> rttq;                 // per-round RTTs, arrival order
  std::vector<std::uint8_t> low_bytes;      // responder reading low bytes
  std::vector<std::uint8_t> sender_bytes;   // extracted (covert runs)
  std::vector<std::uint8_t> receiver_bytes; // embedded (covert runs)
  std::array<double, 8> bit_entropy{};      // valid iff !low_bytes.empty()
  std::optional<double> entropy_av;
  std::optional<double> rtt_av;
  std::map<std::string, double> summary;    // observer end-of-run scalars
  std::uint64_t sent = 0, delivered = 0, lost = 0;
};

// One full run. `covert` selects the byte-carrying variant; everything the
// two variants share (timers, timestamps, link draws) consumes randomness
// identically, which is what makes their timing indistinguishable per seed.
RttRunResult run_rtt(const RttParams& params, std::uint64_t seed, bool covert);

}  // namespace covertsim::rtt
