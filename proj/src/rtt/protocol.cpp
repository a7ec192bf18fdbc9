#include "covertsim/rtt/protocol.hpp"

#include <cmath>

#include "covertsim/errors.hpp"

namespace covertsim::rtt {

std::uint64_t clock_phase(RandomStream& rng) {
  return rng.next_below(kPhaseRange);
}

Timestamp clock_to_ts(Time t, std::uint64_t phase, RandomStream& rng) {
  if (!t.is_finite() || t.value() < 0.0)
    throw InternalError("cannot encode a non-finite clock reading");
  const auto tick = static_cast<std::uint64_t>(std::floor(t.value() / kTickMs));
  const auto jitter =
      static_cast<std::uint64_t>(rng.next_int(0, kJitterMax));
  return tick + phase + jitter;
}

double ts_to_time(Timestamp ts) { return static_cast<double>(ts) * kTickMs; }

double compute_rtt(Timestamp now_reading, Timestamp request_ts) {
  if (now_reading < request_ts)
    throw InternalError("negative round-trip time: response before request");
  return ts_to_time(now_reading - request_ts);
}

std::uint8_t keystream_byte(std::uint64_t shared_seed, std::uint64_t index) {
  return prf_byte(shared_seed, index);
}

Timestamp embed_byte(Timestamp ts, std::uint64_t counter, std::uint8_t byte,
                     std::uint64_t shared_seed) {
  const std::uint8_t masked =
      static_cast<std::uint8_t>(byte ^ keystream_byte(shared_seed, counter));
  return (ts & ~static_cast<Timestamp>(0xFF)) | masked;
}

std::uint8_t extract_byte(Timestamp ts, std::uint64_t counter,
                          std::uint64_t shared_seed) {
  return static_cast<std::uint8_t>((ts & 0xFF) ^
                                   keystream_byte(shared_seed, counter));
}

}  // namespace covertsim::rtt
