#pragma once

#include <cstdint>

#include "covertsim/message.hpp"
#include "covertsim/random.hpp"
#include "covertsim/time.hpp"

namespace covertsim::rtt {

// Wire timestamps are tick counts of a per-device clock, in the style of
// TCP timestamp options: the clock runs at a power-of-two rate (kClockHz),
// boots with an arbitrary phase, and every reading carries a small uniform
// read noise in [0, kJitterMax] ticks. Honest low-order timestamp bits are
// therefore noisy but structured: within one run they cluster around the
// round schedule as seen through that device's tick grid, and the cluster
// position changes from run to run with the boot phase.
inline constexpr std::uint64_t kClockHz = 512;
inline constexpr double kTickMs = 1000.0 / static_cast<double>(kClockHz);
inline constexpr int kJitterMax = 3;
inline constexpr std::uint64_t kPhaseRange = 256;

// Per-device boot phase in ticks, drawn once per run from the device's own
// stream. Only the low byte of a reading is ever inspected, so the phase is
// kept modulo one byte cycle.
std::uint64_t clock_phase(RandomStream& rng);

Timestamp clock_to_ts(Time t, std::uint64_t phase, RandomStream& rng);

// Tick count expressed in time units.
double ts_to_time(Timestamp ts);

// Difference of two readings of the same clock, in time units: the reading
// taken when the response arrived minus the reading sent inside the request.
// The shared phase cancels, so the tick quantisation is unbiased. Throws
// InternalError when the result would be negative: responses cannot precede
// requests.
double compute_rtt(Timestamp now_reading, Timestamp request_ts);

// Position j of the keystream named by the shared secret. Both endpoints
// derive it independently; no key material travels on the wire.
std::uint8_t keystream_byte(std::uint64_t shared_seed, std::uint64_t index);

// Replaces the low 8 bits of ts with byte XOR keystream[counter]; the high
// bits, i.e. the actual clock reading, are untouched.
Timestamp embed_byte(Timestamp ts, std::uint64_t counter, std::uint8_t byte,
                     std::uint64_t shared_seed);

// Recovers the byte embedded at this counter position.
std::uint8_t extract_byte(Timestamp ts, std::uint64_t counter,
                          std::uint64_t shared_seed);

}  // namespace covertsim::rtt
