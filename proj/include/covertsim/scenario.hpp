#pragma once

#include <string>
#include <variant>

#include "covertsim/rtt/scenario.hpp"
#include "covertsim/tunnel/config.hpp"

namespace covertsim {

// A runnable scenario: either the round-trip measurement world or the
// exfiltration-over-tunnels world.
using Scenario = std::variant<rtt::RttParams, tunnel::TunnelConfig>;

const std::string& scenario_name(const Scenario& s);
bool is_tunnel(const Scenario& s);

// Compiled-in presets: the default round-trip measurement setup plus the
// nine tunnel rows. preset() throws ConfigurationError for unknown names.
std::vector<std::string> preset_names();
Scenario preset(const std::string& name);

}  // namespace covertsim
