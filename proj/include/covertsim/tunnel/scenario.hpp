#pragma once

#include <cstdint>

#include "covertsim/properties.hpp"
#include "covertsim/tunnel/config.hpp"
#include "covertsim/world.hpp"

namespace covertsim::tunnel {

// Simulates one run of the configured world and returns its record.
//
// Topology (all hops are registered links):
//
//   query-gen-* ---\                          /--- dns-service --- bob
//   request-gen-* --= relay (boundary tap) ==+
//   alice ---------/                          \--- web-service --- bob
//
// The relay <-> service hops carry loss_alice, the service <-> bob hops
// loss_bob; corporate-side hops are instantaneous and lossless. Both worlds
// derive per-entity streams from the same seed, so with no covert payload
// their observable traces are identical event for event.
RunRecord run_tunnel(const TunnelConfig& config, WorldKind world,
                     std::uint64_t seed);

}  // namespace covertsim::tunnel
