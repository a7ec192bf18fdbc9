#include "covertsim/scenario.hpp"

#include "covertsim/errors.hpp"

namespace covertsim {

const std::string& scenario_name(const Scenario& s) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; },
                    s);
}

bool is_tunnel(const Scenario& s) {
  return std::holds_alternative<tunnel::TunnelConfig>(s);
}

namespace {

// The nine stock exfiltration setups. They share the traffic model (waits,
// delays, chunking) and differ in loss, payload and background load. Stop
// times leave ~30% slack over the expected transfer length so goodput is
// defined for nearly every seed; detection always uses the first 60 s.
struct Row {
  const char* name;
  double loss;        // both boundary links
  int files;
  std::uint64_t bytes;
  int generators;
  double stop_time;
  std::uint64_t count_threshold;  // per-channel cumulative count, first 60 s
  double query_rate_per_s;        // baseline egress query rate
};

// Count thresholds sit at the empirical 1% false-alarm point of 100
// baseline runs over the 60 s window (the calibrate subcommand reproduces
// them); rate baselines round the observed per-channel query rate up.
constexpr Row kRows[] = {
    {"scenario1", 0.000, 10, 6'820, 16, 300'000.0, 490, 8.0},
    {"scenario2", 0.000, 10, 57'509, 32, 1'500'000.0, 973, 16.0},
    {"scenario3", 0.000, 10, 57'123, 48, 1'500'000.0, 1'453, 24.0},
    {"scenario4", 0.050, 5, 8'622, 16, 400'000.0, 490, 8.0},
    {"scenario5", 0.050, 5, 20'758, 32, 700'000.0, 973, 16.0},
    {"scenario6", 0.050, 5, 27'486, 48, 900'000.0, 1'453, 24.0},
    {"scenario7", 0.025, 5, 7'463, 16, 350'000.0, 490, 8.0},
    {"scenario8", 0.025, 7, 34'301, 32, 1'100'000.0, 973, 16.0},
    {"scenario9", 0.025, 7, 39'030, 48, 1'200'000.0, 1'453, 24.0},
};

tunnel::TunnelConfig from_row(const Row& row) {
  tunnel::TunnelConfig c;
  c.name = row.name;
  c.stop_time = row.stop_time;
  c.observation_horizon = 60'000.0;
  c.loss_alice = row.loss;
  c.loss_bob = row.loss;
  c.num_files = row.files;
  c.total_bytes = row.bytes;
  c.num_generators = row.generators;

  CumulativeCountDetector dns_count;
  dns_count.name = "dns-count";
  dns_count.filter = {MsgKind::dns_query, Direction::egress};
  dns_count.threshold = row.count_threshold;

  CumulativeCountDetector https_count;
  https_count.name = "https-count";
  https_count.filter = {MsgKind::https_request, Direction::egress};
  https_count.threshold = row.count_threshold;

  MovingAverageRateDetector dns_rate;
  dns_rate.name = "dns-rate";
  dns_rate.filter = {MsgKind::dns_query, Direction::egress};
  dns_rate.base_rate_per_s = row.query_rate_per_s;

  c.detectors = {dns_count, https_count, dns_rate};
  return c;
}

rtt::RttParams rtt_preset() {
  rtt::RttParams p;
  p.name = "rtt-default";
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names{"rtt-default"};
  for (const auto& row : kRows) names.emplace_back(row.name);
  return names;
}

Scenario preset(const std::string& name) {
  if (name == "rtt-default") return rtt_preset();
  for (const auto& row : kRows) {
    if (name == row.name) return from_row(row);
  }
  throw ConfigurationError("unknown preset \"" + name + "\"");
}

}  // namespace covertsim
