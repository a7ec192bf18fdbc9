#include "covertsim/io/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "covertsim/errors.hpp"

namespace covertsim::io {

namespace {

using nlohmann::json;

// Strict field access: every typo in a config file should be a clear error,
// not a silently applied default.
const json& need(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigurationError(std::string(what) + ": missing field \"" + key +
                             "\"");
  }
  return *it;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  return it->get<T>();
}

}  // namespace

json to_json(const Distribution& d) {
  switch (d.kind()) {
    case Distribution::Kind::constant:
      return json{{"type", "constant"}, {"value", d.a()}};
    case Distribution::Kind::uniform_int:
      return json{{"type", "uniform_int"},
                  {"lo", static_cast<std::int64_t>(d.a())},
                  {"hi", static_cast<std::int64_t>(d.b())}};
    case Distribution::Kind::normal_truncated:
      return json{{"type", "normal_truncated"},
                  {"mean", d.a()},
                  {"stddev", d.b()}};
    case Distribution::Kind::bernoulli:
      return json{{"type", "bernoulli"}, {"p", d.a()}};
  }
  throw InternalError("unhandled distribution kind");
}

Distribution distribution_from_json(const json& j) {
  const std::string type = need(j, "type", "distribution").get<std::string>();
  if (type == "constant") {
    return Distribution::constant(
        need(j, "value", "constant distribution").get<double>());
  }
  if (type == "uniform_int") {
    return Distribution::uniform_int(
        need(j, "lo", "uniform_int distribution").get<std::int64_t>(),
        need(j, "hi", "uniform_int distribution").get<std::int64_t>());
  }
  if (type == "normal_truncated") {
    return Distribution::normal_truncated(
        need(j, "mean", "normal_truncated distribution").get<double>(),
        need(j, "stddev", "normal_truncated distribution").get<double>());
  }
  if (type == "bernoulli") {
    return Distribution::bernoulli(
        need(j, "p", "bernoulli distribution").get<double>());
  }
  throw ConfigurationError("unknown distribution type \"" + type + "\"");
}

namespace {

json filter_to_json(const EventFilter& f) {
  return json{{"kind", msg_kind_name(f.kind)},
              {"direction", direction_name(f.direction)}};
}

EventFilter filter_from_json(const json& j) {
  EventFilter f;
  f.kind = msg_kind_from_name(need(j, "kind", "event filter").get<std::string>());
  f.direction = direction_from_name(
      get_or<std::string>(j, "direction", "egress"));
  return f;
}

}  // namespace

json to_json(const Detector& d) {
  if (const auto* c = std::get_if<CumulativeCountDetector>(&d)) {
    json j{{"type", "cumulative_count"},
           {"name", c->name},
           {"threshold", c->threshold}};
    j["filter"] = filter_to_json(c->filter);
    return j;
  }
  const auto& m = std::get<MovingAverageRateDetector>(d);
  json j{{"type", "moving_average_rate"},
         {"name", m.name},
         {"window", m.window.value()},
         {"bin", m.bin.value()},
         {"multiplier", m.multiplier},
         {"base_rate_per_s", m.base_rate_per_s},
         {"consecutive_bins", m.consecutive_bins},
         {"baseline_warmup", m.baseline_warmup}};
  j["filter"] = filter_to_json(m.filter);
  return j;
}

Detector detector_from_json(const json& j) {
  const std::string type = need(j, "type", "detector").get<std::string>();
  if (type == "cumulative_count") {
    CumulativeCountDetector c;
    c.name = need(j, "name", "detector").get<std::string>();
    c.filter = filter_from_json(need(j, "filter", "detector"));
    c.threshold = need(j, "threshold", "detector").get<std::uint64_t>();
    return c;
  }
  if (type == "moving_average_rate") {
    MovingAverageRateDetector m;
    m.name = need(j, "name", "detector").get<std::string>();
    m.filter = filter_from_json(need(j, "filter", "detector"));
    m.window = Time(get_or<double>(j, "window", m.window.value()));
    m.bin = Time(get_or<double>(j, "bin", m.bin.value()));
    m.multiplier = get_or<double>(j, "multiplier", m.multiplier);
    m.base_rate_per_s =
        need(j, "base_rate_per_s", "rate detector").get<double>();
    m.consecutive_bins = get_or<int>(j, "consecutive_bins", m.consecutive_bins);
    m.baseline_warmup = get_or<bool>(j, "baseline_warmup", m.baseline_warmup);
    return m;
  }
  throw ConfigurationError("unknown detector type \"" + type + "\"");
}

json to_json(const rtt::RttParams& p) {
  json j{{"type", "rtt"},
         {"name", p.name},
         {"start_time", p.start_time.value()},
         {"stop_time", p.stop_time.value()},
         {"period", p.period.value()},
         {"link_loss", p.link_loss},
         {"shared_seed", p.shared_seed}};
  j["link_delay"] = to_json(p.link_delay);
  return j;
}

rtt::RttParams rtt_from_json(const json& j) {
  rtt::RttParams p;
  p.name = get_or<std::string>(j, "name", p.name);
  p.start_time = Time(get_or<double>(j, "start_time", p.start_time.value()));
  p.stop_time = Time(get_or<double>(j, "stop_time", p.stop_time.value()));
  p.period = Time(get_or<double>(j, "period", p.period.value()));
  if (j.contains("link_delay")) {
    p.link_delay = distribution_from_json(j.at("link_delay"));
  }
  p.link_loss = get_or<double>(j, "link_loss", p.link_loss);
  p.shared_seed = get_or<std::uint64_t>(j, "shared_seed", p.shared_seed);
  return p;
}

json to_json(const tunnel::TunnelConfig& c) {
  json j{{"type", "tunnel"},
         {"name", c.name},
         {"stop_time", c.stop_time},
         {"observation_horizon", c.observation_horizon},
         {"loss_alice", c.loss_alice},
         {"loss_bob", c.loss_bob},
         {"num_files", c.num_files},
         {"total_bytes", c.total_bytes},
         {"file_sizes", c.file_sizes},
         {"chunk_size", c.chunk_size},
         {"control_fraction", c.control_fraction},
         {"num_generators", c.num_generators},
         {"gen_mean_wait", c.gen_mean_wait},
         {"gen_sd_wait", c.gen_sd_wait},
         {"mean_wait", c.mean_wait},
         {"sd_wait", c.sd_wait},
         {"retransmit_timeout", c.retransmit_timeout},
         {"retransmit_cap", c.retransmit_cap}};
  j["link_delay"] = to_json(c.link_delay);
  json dets = json::array();
  for (const auto& d : c.detectors) dets.push_back(to_json(d));
  j["detectors"] = std::move(dets);
  return j;
}

tunnel::TunnelConfig tunnel_from_json(const json& j) {
  tunnel::TunnelConfig c;
  c.name = get_or<std::string>(j, "name", c.name);
  c.stop_time = get_or<double>(j, "stop_time", c.stop_time);
  c.observation_horizon =
      get_or<double>(j, "observation_horizon", c.observation_horizon);
  c.loss_alice = get_or<double>(j, "loss_alice", c.loss_alice);
  c.loss_bob = get_or<double>(j, "loss_bob", c.loss_bob);
  c.num_files = get_or<int>(j, "num_files", c.num_files);
  c.total_bytes = get_or<std::uint64_t>(j, "total_bytes", c.total_bytes);
  c.file_sizes =
      get_or<std::vector<std::uint64_t>>(j, "file_sizes", c.file_sizes);
  c.chunk_size = get_or<std::uint64_t>(j, "chunk_size", c.chunk_size);
  c.control_fraction =
      get_or<double>(j, "control_fraction", c.control_fraction);
  c.num_generators = get_or<int>(j, "num_generators", c.num_generators);
  c.gen_mean_wait = get_or<double>(j, "gen_mean_wait", c.gen_mean_wait);
  c.gen_sd_wait = get_or<double>(j, "gen_sd_wait", c.gen_sd_wait);
  c.mean_wait = get_or<double>(j, "mean_wait", c.mean_wait);
  c.sd_wait = get_or<double>(j, "sd_wait", c.sd_wait);
  if (j.contains("link_delay")) {
    c.link_delay = distribution_from_json(j.at("link_delay"));
  }
  c.retransmit_timeout =
      get_or<double>(j, "retransmit_timeout", c.retransmit_timeout);
  c.retransmit_cap = get_or<int>(j, "retransmit_cap", c.retransmit_cap);
  if (j.contains("detectors")) {
    c.detectors.clear();
    for (const auto& dj : j.at("detectors")) {
      c.detectors.push_back(detector_from_json(dj));
    }
  }
  c.validate();
  return c;
}

json to_json(const Scenario& s) {
  if (const auto* p = std::get_if<rtt::RttParams>(&s)) return to_json(*p);
  return to_json(std::get<tunnel::TunnelConfig>(s));
}

Scenario scenario_from_json(const json& j) {
  const std::string type = need(j, "type", "scenario").get<std::string>();
  if (type == "rtt") return rtt_from_json(j);
  if (type == "tunnel") return tunnel_from_json(j);
  throw ConfigurationError("unknown scenario type \"" + type +
                           "\" (expected \"rtt\" or \"tunnel\")");
}

json to_json(const RunRecord& r) {
  json j{{"scenario", r.scenario},
         {"world", world_name(r.world)},
         {"seed", r.seed},
         {"horizon", r.trace.horizon.value()},
         {"files_configured", r.files_configured},
         {"files_acked", r.files_acked},
         {"bytes_acked", r.bytes_acked},
         {"gave_up", r.gave_up},
         {"observer_summary", r.observer_summary}};
  json trace = json::array();
  for (const auto& ev : r.trace.events) {
    trace.push_back(json::array({ev.at.value(), msg_kind_name(ev.kind),
                                 direction_name(ev.direction),
                                 source_class_name(ev.source), ev.size_bytes}));
  }
  j["trace"] = std::move(trace);
  json monitor = json::array();
  for (const auto& ev : r.monitor) {
    monitor.push_back(json::array({ev.at.value(), ev.tag, ev.value}));
  }
  j["monitor"] = std::move(monitor);
  return j;
}

RunRecord run_record_from_json(const json& j) {
  RunRecord r;
  r.scenario = need(j, "scenario", "run record").get<std::string>();
  r.world =
      world_from_name(need(j, "world", "run record").get<std::string>());
  r.seed = need(j, "seed", "run record").get<std::uint64_t>();
  r.trace.horizon = Time(need(j, "horizon", "run record").get<double>());
  for (const auto& row : need(j, "trace", "run record")) {
    if (!row.is_array() || row.size() != 5) {
      throw ConfigurationError("run record: malformed trace row");
    }
    ObservableEvent ev;
    ev.at = Time(row[0].get<double>());
    ev.kind = msg_kind_from_name(row[1].get<std::string>());
    ev.direction = direction_from_name(row[2].get<std::string>());
    ev.source = source_class_from_name(row[3].get<std::string>());
    ev.size_bytes = row[4].get<std::uint64_t>();
    r.trace.events.push_back(ev);
  }
  for (const auto& row : need(j, "monitor", "run record")) {
    if (!row.is_array() || row.size() != 3) {
      throw ConfigurationError("run record: malformed monitor row");
    }
    r.monitor.push_back(MonitorEvent{Time(row[0].get<double>()),
                                     row[1].get<std::string>(),
                                     row[2].get<double>()});
  }
  r.observer_summary = get_or<std::map<std::string, double>>(
      j, "observer_summary", {});
  r.files_configured = get_or<int>(j, "files_configured", 0);
  r.files_acked = get_or<int>(j, "files_acked", 0);
  r.bytes_acked = get_or<std::uint64_t>(j, "bytes_acked", 0);
  r.gave_up = get_or<bool>(j, "gave_up", false);
  return r;
}

namespace {

// JSON numbers cannot hold inf/nan; reports carry them as strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

json to_json(const smc::Estimate& e) {
  return json{{"mean", num(e.mean)},       {"radius", num(e.radius)},
              {"alpha", e.alpha},          {"used", e.used},
              {"discarded", e.discarded},  {"runs", e.runs},
              {"converged", e.converged},  {"impossible", e.impossible}};
}

json to_json(const smc::RateInterval& r) {
  return json{{"lower", r.lower},
              {"upper", r.upper},
              {"point", r.point()},
              {"successes", r.successes},
              {"trials", r.trials},
              {"coverage", r.coverage}};
}

json to_json(const smc::RatePair& r) {
  return json{{"tpr", to_json(r.tpr)},
              {"fpr", to_json(r.fpr)},
              {"joint_coverage", r.joint_coverage},
              {"paired", r.paired}};
}

json to_json(const audit::KlBound& b) {
  return json{{"nats", num(b.nats)},
              {"bits", num(audit::nats_to_bits(b.nats))},
              {"case", audit::bound_case_name(b.which)},
              {"infinite", b.infinite}};
}

json to_json(const audit::ClaimVerdict& v) {
  return json{{"outcome", audit::claim_outcome_name(v.outcome)},
              {"bound", to_json(v.bound)},
              {"epsilon_nats", v.epsilon_nats},
              {"joint_coverage", v.joint_coverage},
              {"runs_per_world", v.runs_per_world},
              {"text", v.text}};
}

json to_json(const audit::PosteriorOdds& p) {
  return json{{"prior_prob", p.prior_prob},
              {"prior_odds", p.prior_odds},
              {"factor", p.factor},
              {"posterior_odds", p.posterior_odds},
              {"posterior_prob", p.posterior_prob}};
}

json to_json(const CalibrationResult& c) {
  json entries = json::array();
  for (const auto& e : c.entries) {
    entries.push_back(json{{"detector", e.detector},
                           {"type", e.type},
                           {"baseline_mean", num(e.baseline_mean)},
                           {"suggested", num(e.suggested)}});
  }
  return json{{"runs", c.runs},
              {"fp_budget", c.fp_budget},
              {"horizon", c.horizon},
              {"entries", std::move(entries)}};
}

json to_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& row : s.rows) {
    json dets = json::array();
    for (const auto& dr : row.detectors) {
      json d{{"detector", dr.detector},
             {"rates", to_json(dr.rates)},
             {"bound", to_json(dr.bound)},
             {"time_to_alarm", to_json(dr.op_duration)}};
      if (dr.claim.has_value()) d["claim"] = to_json(*dr.claim);
      dets.push_back(std::move(d));
    }
    rows.push_back(json{{"value", row.axis_value},
                        {"runs_per_world", row.runs_per_world},
                        {"latency", to_json(row.latency)},
                        {"goodput", to_json(row.goodput)},
                        {"detectors", std::move(dets)}});
  }
  json j{{"axis", sweep_axis_name(s.spec.axis)},
         {"base", to_json(s.spec.base)},
         {"runs_per_world", s.spec.runs_per_world},
         {"alpha", s.spec.alpha},
         {"joint_coverage", s.spec.joint_coverage},
         {"paired", s.spec.paired},
         {"rows", std::move(rows)}};
  if (s.spec.claim_epsilon_nats >= 0.0)
    j["claim_epsilon_nats"] = s.spec.claim_epsilon_nats;
  return j;
}

SweepSpec sweep_spec_from_json(const json& j) {
  SweepSpec spec;
  const json& base = need(j, "base", "sweep spec");
  if (base.is_string()) {
    Scenario s = load_scenario(base.get<std::string>());
    if (!is_tunnel(s)) {
      throw ConfigurationError("sweep spec: base must be a tunnel scenario");
    }
    spec.base = std::get<tunnel::TunnelConfig>(std::move(s));
  } else {
    spec.base = tunnel_from_json(base);
  }
  spec.axis = sweep_axis_from_name(
      need(j, "axis", "sweep spec").get<std::string>());
  spec.values = need(j, "values", "sweep spec").get<std::vector<double>>();
  spec.runs_per_world =
      get_or<std::uint64_t>(j, "runs_per_world", spec.runs_per_world);
  spec.alpha = get_or<double>(j, "alpha", spec.alpha);
  spec.joint_coverage =
      get_or<double>(j, "joint_coverage", spec.joint_coverage);
  spec.claim_epsilon_nats =
      get_or<double>(j, "claim_epsilon_nats", spec.claim_epsilon_nats);
  spec.paired = get_or<bool>(j, "paired", spec.paired);
  return spec;
}

Scenario load_scenario(const std::string& name_or_path) {
  for (const auto& n : preset_names()) {
    if (n == name_or_path) return preset(name_or_path);
  }
  std::error_code ec;
  if (!std::filesystem::exists(name_or_path, ec)) {
    std::string known;
    for (const auto& n : preset_names()) {
      if (!known.empty()) known += ", ";
      known += n;
    }
    throw ConfigurationError("\"" + name_or_path +
                             "\" is neither a preset nor a file. Presets: " +
                             known);
  }
  json j;
  try {
    j = json::parse(read_text_file(name_or_path));
  } catch (const json::parse_error& e) {
    throw ConfigurationError("failed to parse " + name_or_path + ": " +
                             e.what());
  }
  return scenario_from_json(j);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigurationError("cannot open " + path.string() + " for reading");
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw ConfigurationError("cannot open " + path.string() + " for writing");
  }
  out << content;
  if (!out) {
    throw ConfigurationError("failed writing " + path.string());
  }
}

std::string pretty(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace covertsim::io
