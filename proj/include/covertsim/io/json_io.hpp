#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "covertsim/detector.hpp"
#include "covertsim/distribution.hpp"
#include "covertsim/properties.hpp"
#include "covertsim/scenario.hpp"
#include "covertsim/sweep.hpp"

namespace covertsim::io {

// JSON round-tripping for configs and run records. Serialization is stable:
// object keys come out sorted and numbers print in shortest-round-trip form,
// so equal inputs produce byte-equal files.

nlohmann::json to_json(const Distribution& d);
Distribution distribution_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Detector& d);
Detector detector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const rtt::RttParams& p);
rtt::RttParams rtt_from_json(const nlohmann::json& j);

nlohmann::json to_json(const tunnel::TunnelConfig& c);
tunnel::TunnelConfig tunnel_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);

// Report building blocks. Write-only: reports are artifacts, not inputs.
// Non-finite numbers come out as the strings "inf", "-inf", "nan" because
// JSON numbers cannot carry them.
nlohmann::json to_json(const smc::Estimate& e);
nlohmann::json to_json(const smc::RateInterval& r);
nlohmann::json to_json(const smc::RatePair& r);
nlohmann::json to_json(const audit::KlBound& b);
nlohmann::json to_json(const audit::ClaimVerdict& v);
nlohmann::json to_json(const audit::PosteriorOdds& p);
nlohmann::json to_json(const CalibrationResult& c);
nlohmann::json to_json(const SweepResult& s);

// Sweep input. "base" is either a preset name or an inline tunnel config.
SweepSpec sweep_spec_from_json(const nlohmann::json& j);

// Resolves a --config argument: a compiled-in preset name, or a path to a
// JSON scenario file. Throws ConfigurationError with a helpful message.
Scenario load_scenario(const std::string& name_or_path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

// dump(2) plus trailing newline; the one formatting used for all artifacts.
std::string pretty(const nlohmann::json& j);

}  // namespace covertsim::io
