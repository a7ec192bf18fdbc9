#pragma once

#include <optional>
#include <string>
#include <vector>

#include "covertsim/audit/kl.hpp"
#include "covertsim/smc/estimator.hpp"
#include "covertsim/tunnel/config.hpp"

namespace covertsim {

// Parameter sweeps over the exfiltration scenario: one knob varies, every
// row gets performance estimates plus, per detector, alarm-rate rectangles,
// the certified divergence bound and time-to-alarm. This is the tradeoff
// table the whole exercise exists to produce.

enum class SweepAxis {
  mean_wait,         // insider pacing (tunnel config mean_wait)
  loss,              // both boundary loss knobs together
  num_generators,    // background load
  num_files,         // payload split
  count_threshold,   // every cumulative-count detector's threshold
  rate_multiplier,   // every rate detector's multiplier
};

const char* sweep_axis_name(SweepAxis a);
SweepAxis sweep_axis_from_name(const std::string& name);

// Detector-only axes reuse one simulated run set across all rows, so row
// differences are purely the detector's doing.
bool axis_affects_world(SweepAxis a);

tunnel::TunnelConfig apply_axis(tunnel::TunnelConfig base, SweepAxis axis,
                                double value);

struct SweepSpec {
  tunnel::TunnelConfig base;
  SweepAxis axis = SweepAxis::mean_wait;
  std::vector<double> values;
  std::uint64_t runs_per_world = 200;
  double alpha = 0.05;           // performance interval level
  double joint_coverage = 0.95;  // TPR/FPR rectangle level
  double claim_epsilon_nats = -1.0;  // >= 0 audits the claim per row
  bool paired = false;           // one seed drives both worlds of run i
};

struct DetectorRow {
  std::string detector;
  smc::RatePair rates;
  audit::KlBound bound;
  smc::Estimate op_duration;  // covert world, counted from first emission
  std::optional<audit::ClaimVerdict> claim;
};

struct SweepRow {
  double axis_value = 0.0;
  std::uint64_t runs_per_world = 0;
  smc::Estimate latency;
  smc::Estimate goodput;
  std::vector<DetectorRow> detectors;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
};

SweepResult run_sweep(const SweepSpec& spec, std::uint64_t root_seed,
                      int workers);

// One-off audit of a config's detectors at fixed n per world: a single
// sweep row without an axis.
struct AuditOptions {
  std::uint64_t runs_per_world = 200;
  double alpha = 0.05;
  double joint_coverage = 0.95;
  double claim_epsilon_nats = -1.0;
  bool paired = false;
};

SweepRow run_audit(const tunnel::TunnelConfig& config,
                   const AuditOptions& options, std::uint64_t root_seed,
                   int workers);

// Tab-separated table, one row per axis value; detector columns are
// prefixed with the detector name.
std::string sweep_table(const SweepResult& result);

// Baseline calibration: ordinary-world runs only. Cumulative detectors get
// the smallest threshold whose empirical false-alarm share is within the
// budget; rate detectors get the observed mean rate as base_rate_per_s.
struct CalibrationEntry {
  std::string detector;
  std::string type;
  double baseline_mean = 0.0;
  double suggested = 0.0;
};

struct CalibrationResult {
  std::uint64_t runs = 0;
  double fp_budget = 0.0;
  double horizon = 0.0;
  std::vector<CalibrationEntry> entries;
};

CalibrationResult calibrate(const tunnel::TunnelConfig& config,
                            std::uint64_t runs, double fp_budget,
                            std::uint64_t root_seed, int workers);

tunnel::TunnelConfig apply_calibration(tunnel::TunnelConfig config,
                                       const CalibrationResult& calibration);

}  // namespace covertsim
