#include "covertsim/sweep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "covertsim/errors.hpp"
#include "covertsim/properties.hpp"
#include "covertsim/random.hpp"
#include "covertsim/tunnel/scenario.hpp"

namespace covertsim {

const char* sweep_axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::mean_wait: return "mean_wait";
    case SweepAxis::loss: return "loss";
    case SweepAxis::num_generators: return "num_generators";
    case SweepAxis::num_files: return "num_files";
    case SweepAxis::count_threshold: return "count_threshold";
    case SweepAxis::rate_multiplier: return "rate_multiplier";
  }
  throw InternalError("unhandled sweep axis");
}

SweepAxis sweep_axis_from_name(const std::string& name) {
  for (auto a : {SweepAxis::mean_wait, SweepAxis::loss,
                 SweepAxis::num_generators, SweepAxis::num_files,
                 SweepAxis::count_threshold, SweepAxis::rate_multiplier}) {
    if (name == sweep_axis_name(a)) return a;
  }
  throw ConfigurationError("unknown sweep axis \"" + name + "\"");
}

bool axis_affects_world(SweepAxis a) {
  return a != SweepAxis::count_threshold && a != SweepAxis::rate_multiplier;
}

tunnel::TunnelConfig apply_axis(tunnel::TunnelConfig base, SweepAxis axis,
                                double value) {
  switch (axis) {
    case SweepAxis::mean_wait:
      base.mean_wait = value;
      break;
    case SweepAxis::loss:
      base.loss_alice = value;
      base.loss_bob = value;
      break;
    case SweepAxis::num_generators:
      base.num_generators = static_cast<int>(std::llround(value));
      break;
    case SweepAxis::num_files:
      base.num_files = static_cast<int>(std::llround(value));
      break;
    case SweepAxis::count_threshold:
      for (auto& d : base.detectors) {
        if (auto* c = std::get_if<CumulativeCountDetector>(&d)) {
          c->threshold = static_cast<std::uint64_t>(std::llround(value));
        }
      }
      break;
    case SweepAxis::rate_multiplier:
      for (auto& d : base.detectors) {
        if (auto* m = std::get_if<MovingAverageRateDetector>(&d)) {
          m->multiplier = value;
        }
      }
      break;
  }
  base.validate();
  return base;
}

namespace {

struct WorldRecords {
  std::vector<RunRecord> hcs;
  std::vector<RunRecord> ordinary;
};

// The record sets one row is judged on. Seeding matches estimate_rates:
// paired mode reuses one seed per index across worlds.
WorldRecords simulate_row(const tunnel::TunnelConfig& cfg,
                          const SweepSpec& spec, std::uint64_t row_seed,
                          int workers) {
  const std::uint64_t n = spec.runs_per_world;
  std::function<RunRecord(std::uint64_t)> job = [&](std::uint64_t i) {
    const bool is_hcs = i < n;
    const std::uint64_t idx = is_hcs ? i : i - n;
    const WorldKind w = is_hcs ? WorldKind::hcs : WorldKind::ordinary;
    const std::uint64_t seed =
        spec.paired ? smc::run_seed(row_seed, "paired", idx)
                    : smc::run_seed(row_seed, world_name(w), idx);
    return tunnel::run_tunnel(cfg, w, seed);
  };
  auto all = smc::parallel_map<RunRecord>(2 * n, workers, job);
  WorldRecords out;
  out.hcs.assign(std::make_move_iterator(all.begin()),
                 std::make_move_iterator(all.begin() + static_cast<long>(n)));
  out.ordinary.assign(std::make_move_iterator(all.begin() + static_cast<long>(n)),
                      std::make_move_iterator(all.end()));
  return out;
}

SweepRow score_row(const tunnel::TunnelConfig& cfg, const SweepSpec& spec,
                   const WorldRecords& records, double axis_value) {
  SweepRow row;
  row.axis_value = axis_value;
  row.runs_per_world = spec.runs_per_world;

  std::vector<PropertyValue> lat, good;
  lat.reserve(records.hcs.size());
  good.reserve(records.hcs.size());
  for (const auto& r : records.hcs) {
    lat.push_back(latency(r));
    good.push_back(goodput(r));
  }
  row.latency = smc::summarize(lat, spec.alpha);
  row.goodput = smc::summarize(good, spec.alpha);

  const Time horizon = cfg.effective_observation_horizon();
  const double per_interval = 1.0 - (1.0 - spec.joint_coverage) / 2.0;
  for (const auto& det : cfg.detectors) {
    DetectorRow dr;
    dr.detector = detector_name(det);
    std::uint64_t tp = 0, fp = 0;
    std::vector<PropertyValue> durations;
    durations.reserve(records.hcs.size());
    for (const auto& r : records.hcs) {
      tp += alarm_indicator(r, det, horizon).value > 0.5 ? 1 : 0;
      durations.push_back(op_duration(r, det, horizon));
    }
    for (const auto& r : records.ordinary) {
      fp += alarm_indicator(r, det, horizon).value > 0.5 ? 1 : 0;
    }
    dr.rates.tpr = smc::clopper_pearson(tp, records.hcs.size(), per_interval);
    dr.rates.fpr =
        smc::clopper_pearson(fp, records.ordinary.size(), per_interval);
    dr.rates.joint_coverage = spec.joint_coverage;
    dr.rates.paired = spec.paired;
    dr.bound = audit::certified_lower_bound(dr.rates.tpr, dr.rates.fpr);
    dr.op_duration = smc::summarize(durations, spec.alpha);
    if (spec.claim_epsilon_nats >= 0.0) {
      dr.claim = audit::audit_claim(
          audit::UndetectabilityClaim{spec.claim_epsilon_nats,
                                      horizon.value()},
          dr.rates.tpr, dr.rates.fpr, spec.joint_coverage);
    }
    row.detectors.push_back(std::move(dr));
  }
  return row;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// An estimate with no usable samples keeps mean 0; printing that as a real
// value would read as an instant alarm, so the table shows nan instead.
double or_nan(double v, const smc::Estimate& e) {
  return e.impossible ? std::numeric_limits<double>::quiet_NaN() : v;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, std::uint64_t root_seed,
                      int workers) {
  if (spec.values.empty())
    throw ConfigurationError("sweep: no axis values given");
  if (spec.runs_per_world == 0)
    throw ConfigurationError("sweep: runs_per_world must be >= 1");

  SweepResult result;
  result.spec = spec;

  const std::uint64_t sweep_seed = derive_seed(root_seed, "sweep");
  const bool shared_runs = !axis_affects_world(spec.axis);

  WorldRecords shared;
  if (shared_runs) {
    shared = simulate_row(spec.base, spec, derive_seed(sweep_seed, "shared"),
                          workers);
  }

  for (const double value : spec.values) {
    const auto cfg = apply_axis(spec.base, spec.axis, value);
    if (shared_runs) {
      result.rows.push_back(score_row(cfg, spec, shared, value));
      continue;
    }
    // Row seed keyed by the axis value's bit pattern: stable per value, no
    // accidental reuse between different rows.
    const std::uint64_t row_seed =
        derive_seed(sweep_seed, std::bit_cast<std::uint64_t>(value));
    const auto records = simulate_row(cfg, spec, row_seed, workers);
    result.rows.push_back(score_row(cfg, spec, records, value));
  }
  return result;
}

SweepRow run_audit(const tunnel::TunnelConfig& config,
                   const AuditOptions& options, std::uint64_t root_seed,
                   int workers) {
  config.validate();
  if (options.runs_per_world == 0)
    throw ConfigurationError("audit: runs_per_world must be >= 1");
  SweepSpec spec;
  spec.base = config;
  spec.runs_per_world = options.runs_per_world;
  spec.alpha = options.alpha;
  spec.joint_coverage = options.joint_coverage;
  spec.claim_epsilon_nats = options.claim_epsilon_nats;
  spec.paired = options.paired;
  const auto records =
      simulate_row(config, spec, derive_seed(root_seed, "audit"), workers);
  return score_row(config, spec, records, 0.0);
}

std::string sweep_table(const SweepResult& result) {
  std::ostringstream os;
  os << sweep_axis_name(result.spec.axis)
     << "\truns_per_world\tlatency_ms\tlatency_radius\tlatency_used"
     << "\tgoodput_Bps\tgoodput_radius\tgoodput_used";
  std::vector<std::string> names;
  for (const auto& det : result.spec.base.detectors)
    names.push_back(detector_name(det));
  for (const auto& n : names) {
    os << '\t' << n << "_tpr\t" << n << "_tpr_lo\t" << n << "_tpr_hi\t" << n
       << "_fpr\t" << n << "_fpr_lo\t" << n << "_fpr_hi\t" << n
       << "_kl_nats\t" << n << "_case\t" << n << "_ttalarm_ms\t" << n
       << "_ttalarm_used";
    if (result.spec.claim_epsilon_nats >= 0.0) os << '\t' << n << "_claim";
  }
  os << '\n';

  for (const auto& row : result.rows) {
    os << fmt(row.axis_value) << '\t' << row.runs_per_world << '\t'
       << fmt(or_nan(row.latency.mean, row.latency)) << '\t'
       << fmt(or_nan(row.latency.radius, row.latency)) << '\t'
       << row.latency.used << '\t'
       << fmt(or_nan(row.goodput.mean, row.goodput)) << '\t'
       << fmt(or_nan(row.goodput.radius, row.goodput)) << '\t'
       << row.goodput.used;
    for (const auto& dr : row.detectors) {
      os << '\t' << fmt(dr.rates.tpr.point()) << '\t'
         << fmt(dr.rates.tpr.lower) << '\t' << fmt(dr.rates.tpr.upper) << '\t'
         << fmt(dr.rates.fpr.point()) << '\t' << fmt(dr.rates.fpr.lower)
         << '\t' << fmt(dr.rates.fpr.upper) << '\t' << fmt(dr.bound.nats)
         << '\t' << audit::bound_case_name(dr.bound.which) << '\t'
         << fmt(or_nan(dr.op_duration.mean, dr.op_duration)) << '\t'
         << dr.op_duration.used;
      if (dr.claim.has_value())
        os << '\t' << audit::claim_outcome_name(dr.claim->outcome);
    }
    os << '\n';
  }
  return os.str();
}

CalibrationResult calibrate(const tunnel::TunnelConfig& config,
                            std::uint64_t runs, double fp_budget,
                            std::uint64_t root_seed, int workers) {
  config.validate();
  if (runs == 0) throw ConfigurationError("calibrate: runs must be >= 1");
  if (!(fp_budget >= 0.0 && fp_budget < 1.0))
    throw ConfigurationError("calibrate: fp budget must be in [0, 1)");
  if (config.detectors.empty())
    throw ConfigurationError("calibrate: config declares no detectors");

  const Time horizon = config.effective_observation_horizon();
  std::function<RunRecord(std::uint64_t)> job = [&](std::uint64_t i) {
    return tunnel::run_tunnel(config, WorldKind::ordinary,
                              smc::run_seed(root_seed, "calibrate", i));
  };
  const auto records = smc::parallel_map<RunRecord>(runs, workers, job);

  CalibrationResult out;
  out.runs = runs;
  out.fp_budget = fp_budget;
  out.horizon = horizon.value();

  for (const auto& det : config.detectors) {
    CalibrationEntry entry;
    entry.detector = detector_name(det);
    const EventFilter filter = std::visit(
        [](const auto& d) { return d.filter; }, det);

    std::vector<std::uint64_t> counts;
    counts.reserve(records.size());
    for (const auto& r : records) {
      std::uint64_t c = 0;
      for (const auto& ev : r.trace.events) {
        if (ev.at <= horizon && filter.matches(ev)) ++c;
      }
      counts.push_back(c);
    }
    double mean = 0.0;
    for (auto c : counts) mean += static_cast<double>(c);
    mean /= static_cast<double>(counts.size());

    if (std::holds_alternative<CumulativeCountDetector>(det)) {
      entry.type = "cumulative_count";
      entry.baseline_mean = mean;
      // Smallest threshold with empirical P(count > threshold) <= budget:
      // the (allowed+1)-th largest observed count.
      std::sort(counts.begin(), counts.end());
      const auto allowed = static_cast<std::uint64_t>(
          std::floor(fp_budget * static_cast<double>(runs)));
      const std::size_t pick =
          counts.size() - 1 - static_cast<std::size_t>(
                                  std::min<std::uint64_t>(allowed, runs - 1));
      entry.suggested = static_cast<double>(counts[pick]);
    } else {
      entry.type = "moving_average_rate";
      entry.baseline_mean = mean / to_seconds(horizon);
      entry.suggested = entry.baseline_mean;
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

tunnel::TunnelConfig apply_calibration(tunnel::TunnelConfig config,
                                       const CalibrationResult& calibration) {
  for (auto& det : config.detectors) {
    for (const auto& entry : calibration.entries) {
      if (entry.detector != detector_name(det)) continue;
      if (auto* c = std::get_if<CumulativeCountDetector>(&det)) {
        c->threshold = static_cast<std::uint64_t>(std::llround(entry.suggested));
      } else if (auto* m = std::get_if<MovingAverageRateDetector>(&det)) {
        m->base_rate_per_s = entry.suggested;
      }
    }
  }
  return config;
}

}  // namespace covertsim
