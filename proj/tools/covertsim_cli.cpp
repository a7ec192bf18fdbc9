// Command-line front end: simulate scenarios, audit detector setups,
// sweep parameters, calibrate baselines and replay archived runs.
//
// Exit codes: 0 success, 2 configuration problem, 3 estimation impossible
// (every run discarded), 1 anything else.

#include <CLI11.hpp>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "covertsim/errors.hpp"
#include "covertsim/io/json_io.hpp"
#include "covertsim/properties.hpp"
#include "covertsim/rtt/scenario.hpp"
#include "covertsim/scenario.hpp"
#include "covertsim/smc/estimator.hpp"
#include "covertsim/sweep.hpp"
#include "covertsim/tunnel/scenario.hpp"

namespace {

using namespace covertsim;
namespace fs = std::filesystem;
using nlohmann::json;

std::string run_file_name(std::uint64_t index, const char* ext) {
  std::ostringstream os;
  os << "run-" << std::setw(6) << std::setfill('0') << index << ext;
  return os.str();
}

void emit(const json& report, const std::string& out_path) {
  const std::string text = io::pretty(report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(out_path, text);
    std::cout << "wrote " << out_path << "\n";
  }
}

// Throws when an estimate never saw a usable sample; the CLI maps that to
// its own exit code so scripts can tell "impossible" from "wrong flags".
void require_possible(const smc::Estimate& e, const std::string& what) {
  if (e.impossible) {
    throw EstimationImpossibleError("every run was discarded while estimating " +
                                    what);
  }
}

struct CommonOpts {
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--seed", c.seed, "Root seed for run derivation");
  cmd->add_option("--workers", c.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Write the JSON report here (default stdout)");
}

int cmd_presets(const std::string& show, const std::string& dump_dir) {
  if (!show.empty()) {
    std::cout << io::pretty(io::to_json(preset(show)));
    return 0;
  }
  if (!dump_dir.empty()) {
    for (const auto& name : preset_names()) {
      io::write_text_file(fs::path(dump_dir) / (name + ".json"),
                          io::pretty(io::to_json(preset(name))));
    }
    std::cout << "wrote " << preset_names().size() << " presets to "
              << dump_dir << "\n";
    return 0;
  }
  for (const auto& name : preset_names()) std::cout << name << "\n";
  return 0;
}

struct SimulateOpts {
  CommonOpts common;
  std::string config;
  std::string world = "hcs";
  double alpha = 0.05;
  double delta = 0.1;
  std::uint64_t min_runs = 30;
  std::uint64_t max_runs = 500;
  std::uint64_t fixed_runs = 0;  // > 0: fixed-n mode (required for archives)
  std::string archive_dir;
  std::string trace_dir;
};

int cmd_simulate(const SimulateOpts& opt) {
  const Scenario scenario = io::load_scenario(opt.config);
  const WorldKind world = world_from_name(opt.world);
  const bool fixed = opt.fixed_runs > 0;
  if ((!opt.archive_dir.empty() || !opt.trace_dir.empty()) && !fixed) {
    throw ConfigurationError(
        "--archive/--export-traces need --runs: the adaptive stop does not "
        "pin down which runs execute");
  }

  json report{{"command", "simulate"},
              {"scenario", scenario_name(scenario)},
              {"world", world_name(world)},
              {"seed", opt.common.seed}};

  smc::SmcParams params;
  params.alpha = opt.alpha;
  params.delta = opt.delta;
  params.min_runs = opt.min_runs;
  params.max_runs = opt.max_runs;
  params.workers = opt.common.workers;
  params.root_seed = opt.common.seed;
  params.seed_tag = world_name(world);

  if (!is_tunnel(scenario)) {
    const auto& rp = std::get<rtt::RttParams>(scenario);
    const bool covert = world == WorldKind::hcs;
    smc::MultiSampler sample = [&](std::uint64_t, std::uint64_t seed) {
      const auto r = rtt::run_rtt(rp, seed, covert);
      std::vector<PropertyValue> row;
      row.push_back(r.rtt_av ? PropertyValue::of(*r.rtt_av)
                             : PropertyValue::discard());
      row.push_back(r.entropy_av ? PropertyValue::of(*r.entropy_av)
                                 : PropertyValue::discard());
      return row;
    };
    std::vector<smc::Estimate> est;
    if (fixed) {
      std::vector<PropertyValue> rtts, ents;
      for (std::uint64_t i = 0; i < opt.fixed_runs; ++i) {
        auto row = sample(i, smc::run_seed(params.root_seed, params.seed_tag, i));
        rtts.push_back(row[0]);
        ents.push_back(row[1]);
      }
      est = {smc::summarize(rtts, opt.alpha), smc::summarize(ents, opt.alpha)};
    } else {
      est = smc::estimate_expectations(sample, 2, params);
    }
    require_possible(est[0], "mean round-trip time");
    report["estimation"] = json{{"alpha", opt.alpha},
                                {"delta", opt.delta},
                                {"min_runs", opt.min_runs},
                                {"max_runs", opt.max_runs},
                                {"fixed_runs", opt.fixed_runs}};
    report["properties"] = json{{"rtt_av_ms", io::to_json(est[0])},
                                {"entropy_av", io::to_json(est[1])}};
    emit(report, opt.common.out);
    return 0;
  }

  const auto& cfg = std::get<tunnel::TunnelConfig>(scenario);
  cfg.validate();
  const bool has_transfer = world == WorldKind::hcs && cfg.num_files > 0;

  auto archive_record = [&](std::uint64_t i, const RunRecord& rec) {
    if (!opt.archive_dir.empty()) {
      io::write_text_file(fs::path(opt.archive_dir) / run_file_name(i, ".json"),
                          io::pretty(io::to_json(rec)));
    }
    if (!opt.trace_dir.empty()) {
      std::ostringstream os;
      rec.trace.write_tsv(os);
      io::write_text_file(fs::path(opt.trace_dir) / run_file_name(i, ".tsv"),
                          os.str());
    }
  };

  if (fixed) {
    std::vector<PropertyValue> lats, goods;
    for (std::uint64_t i = 0; i < opt.fixed_runs; ++i) {
      const auto rec = tunnel::run_tunnel(
          cfg, world, smc::run_seed(params.root_seed, params.seed_tag, i));
      archive_record(i, rec);
      lats.push_back(latency(rec));
      goods.push_back(goodput(rec));
    }
    report["estimation"] = json{{"alpha", opt.alpha},
                                {"fixed_runs", opt.fixed_runs}};
    if (has_transfer) {
      auto lat = smc::summarize(lats, opt.alpha);
      auto good = smc::summarize(goods, opt.alpha);
      require_possible(lat, "transfer latency");
      report["properties"] = json{{"latency_ms", io::to_json(lat)},
                                  {"goodput_Bps", io::to_json(good)}};
    }
    if (!opt.archive_dir.empty()) report["archive"] = opt.archive_dir;
    if (!opt.trace_dir.empty()) report["traces"] = opt.trace_dir;
    emit(report, opt.common.out);
    return 0;
  }

  if (!has_transfer) {
    throw ConfigurationError(
        "nothing to estimate: this world runs no transfer; use --runs N for "
        "fixed-n simulation");
  }
  smc::MultiSampler sample = [&](std::uint64_t, std::uint64_t seed) {
    const auto rec = tunnel::run_tunnel(cfg, world, seed);
    return std::vector<PropertyValue>{latency(rec), goodput(rec)};
  };
  auto est = smc::estimate_expectations(sample, 2, params);
  require_possible(est[0], "transfer latency");
  report["estimation"] = json{{"alpha", opt.alpha},
                              {"delta", opt.delta},
                              {"min_runs", opt.min_runs},
                              {"max_runs", opt.max_runs}};
  report["properties"] = json{{"latency_ms", io::to_json(est[0])},
                              {"goodput_Bps", io::to_json(est[1])}};
  emit(report, opt.common.out);
  return 0;
}

struct AuditOpts {
  CommonOpts common;
  std::string config;
  AuditOptions options;
  double prior = -1.0;
};

int cmd_audit(const AuditOpts& opt) {
  const Scenario scenario = io::load_scenario(opt.config);
  if (!is_tunnel(scenario)) {
    throw ConfigurationError("audit needs a tunnel scenario");
  }
  const auto& cfg = std::get<tunnel::TunnelConfig>(scenario);
  if (cfg.detectors.empty()) {
    throw ConfigurationError("audit: config declares no detectors");
  }
  const SweepRow row =
      run_audit(cfg, opt.options, opt.common.seed, opt.common.workers);

  json dets = json::array();
  for (const auto& dr : row.detectors) {
    json d{{"detector", dr.detector},
           {"rates", io::to_json(dr.rates)},
           {"bound", io::to_json(dr.bound)},
           {"time_to_alarm", io::to_json(dr.op_duration)}};
    if (dr.claim.has_value()) d["claim"] = io::to_json(*dr.claim);
    dets.push_back(std::move(d));
  }
  json report{{"command", "audit"},
              {"scenario", cfg.name},
              {"seed", opt.common.seed},
              {"runs_per_world", opt.options.runs_per_world},
              {"paired", opt.options.paired},
              {"alpha", opt.options.alpha},
              {"joint_coverage", opt.options.joint_coverage},
              {"horizon", cfg.effective_observation_horizon().value()},
              {"latency", io::to_json(row.latency)},
              {"goodput", io::to_json(row.goodput)},
              {"detectors", std::move(dets)}};
  if (opt.prior > 0.0 && opt.options.claim_epsilon_nats >= 0.0) {
    report["posterior"] = io::to_json(
        audit::posterior_odds(opt.prior, opt.options.claim_epsilon_nats));
  }
  emit(report, opt.common.out);
  return 0;
}

struct SweepOpts {
  CommonOpts common;
  std::string spec_path;
  std::string table_out;
};

int cmd_sweep(const SweepOpts& opt) {
  const json spec_json = json::parse(io::read_text_file(opt.spec_path));
  const SweepSpec spec = io::sweep_spec_from_json(spec_json);
  const SweepResult result =
      run_sweep(spec, opt.common.seed, opt.common.workers);
  const std::string table = sweep_table(result);
  if (!opt.table_out.empty()) {
    io::write_text_file(opt.table_out, table);
    std::cout << "wrote " << opt.table_out << "\n";
  } else {
    std::cout << table;
  }
  json report = io::to_json(result);
  report["command"] = "sweep";
  report["seed"] = opt.common.seed;
  if (!opt.common.out.empty()) emit(report, opt.common.out);
  return 0;
}

struct CalibrateOpts {
  CommonOpts common;
  std::string config;
  std::uint64_t runs = 200;
  double budget = 0.01;
  std::string emit_config;
};

int cmd_calibrate(const CalibrateOpts& opt) {
  const Scenario scenario = io::load_scenario(opt.config);
  if (!is_tunnel(scenario)) {
    throw ConfigurationError("calibrate needs a tunnel scenario");
  }
  const auto& cfg = std::get<tunnel::TunnelConfig>(scenario);
  const auto result = calibrate(cfg, opt.runs, opt.budget, opt.common.seed,
                                opt.common.workers);
  json report = io::to_json(result);
  report["command"] = "calibrate";
  report["scenario"] = cfg.name;
  report["seed"] = opt.common.seed;
  emit(report, opt.common.out);
  if (!opt.emit_config.empty()) {
    io::write_text_file(
        opt.emit_config,
        io::pretty(io::to_json(apply_calibration(cfg, result))));
    std::cout << "wrote " << opt.emit_config << "\n";
  }
  return 0;
}

struct ReplayOpts {
  CommonOpts common;
  std::string archive_dir;
  std::string config;
  double horizon = 0.0;
};

int cmd_replay(const ReplayOpts& opt) {
  const Scenario scenario = io::load_scenario(opt.config);
  if (!is_tunnel(scenario)) {
    throw ConfigurationError("replay needs a tunnel scenario for detectors");
  }
  const auto& cfg = std::get<tunnel::TunnelConfig>(scenario);
  if (cfg.detectors.empty()) {
    throw ConfigurationError("replay: config declares no detectors");
  }

  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(opt.archive_dir)) {
    if (entry.path().extension() == ".json") paths.push_back(entry.path());
  }
  if (paths.empty()) {
    throw ConfigurationError("no .json records under " + opt.archive_dir);
  }
  std::sort(paths.begin(), paths.end());

  std::vector<RunRecord> records;
  records.reserve(paths.size());
  for (const auto& p : paths) {
    records.push_back(
        io::run_record_from_json(json::parse(io::read_text_file(p))));
  }

  json worlds;
  for (const WorldKind w : {WorldKind::ordinary, WorldKind::hcs}) {
    std::vector<const RunRecord*> subset;
    for (const auto& r : records)
      if (r.world == w) subset.push_back(&r);
    if (subset.empty()) continue;
    json dets = json::array();
    for (const auto& det : cfg.detectors) {
      std::uint64_t alarms = 0;
      std::vector<PropertyValue> durations;
      for (const auto* r : subset) {
        const Time h =
            opt.horizon > 0.0 ? Time(opt.horizon) : r->trace.horizon;
        alarms += alarm_indicator(*r, det, h).value > 0.5 ? 1 : 0;
        durations.push_back(op_duration(*r, det, h));
      }
      dets.push_back(
          json{{"detector", detector_name(det)},
               {"alarms", alarms},
               {"runs", subset.size()},
               {"fraction", static_cast<double>(alarms) /
                                static_cast<double>(subset.size())},
               {"time_to_alarm",
                io::to_json(smc::summarize(durations, 0.05))}});
    }
    worlds[world_name(w)] = std::move(dets);
  }

  json report{{"command", "replay"},
              {"archive", opt.archive_dir},
              {"records", records.size()},
              {"horizon", opt.horizon},
              {"worlds", std::move(worlds)}};
  emit(report, opt.common.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "covertsim: probabilistic network simulator and undetectability "
      "auditor for covert-channel setups"};
  app.require_subcommand(1);

  std::string presets_show, presets_dump;
  auto* presets_cmd = app.add_subcommand("presets", "List built-in scenarios");
  presets_cmd->add_option("--show", presets_show, "Dump one preset as JSON");
  presets_cmd->add_option("--dump-dir", presets_dump,
                          "Write every preset to this directory");

  SimulateOpts sim;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "Estimate performance properties of a scenario");
  sim_cmd->add_option("--config", sim.config, "Preset name or JSON file")
      ->required();
  sim_cmd->add_option("--world", sim.world, "ordinary or hcs")
      ->check(CLI::IsMember({"ordinary", "hcs"}));
  sim_cmd->add_option("--alpha", sim.alpha, "1 - confidence level");
  sim_cmd->add_option("--delta", sim.delta,
                      "Target CI width for the adaptive stop");
  sim_cmd->add_option("--min-runs", sim.min_runs, "Adaptive lower bound");
  sim_cmd->add_option("--max-runs", sim.max_runs, "Adaptive upper bound");
  sim_cmd->add_option("--runs", sim.fixed_runs,
                      "Fixed run count (disables the adaptive stop)");
  sim_cmd->add_option("--archive", sim.archive_dir,
                      "Write one JSON record per run (needs --runs)");
  sim_cmd->add_option("--export-traces", sim.trace_dir,
                      "Write one TSV trace per run (needs --runs)");
  add_common(sim_cmd, sim.common);

  AuditOpts audit_opts;
  auto* audit_cmd = app.add_subcommand(
      "audit", "Alarm rates, certified divergence bound and claim check");
  audit_cmd->add_option("--config", audit_opts.config, "Preset name or JSON file")
      ->required();
  audit_cmd->add_option("--runs", audit_opts.options.runs_per_world,
                        "Runs per world");
  audit_cmd->add_option("--alpha", audit_opts.options.alpha,
                        "Performance interval level");
  audit_cmd->add_option("--coverage", audit_opts.options.joint_coverage,
                        "Joint TPR/FPR coverage");
  audit_cmd->add_option("--claim-eps", audit_opts.options.claim_epsilon_nats,
                        "Audit the claim 'within eps nats'");
  audit_cmd->add_option("--prior", audit_opts.prior,
                        "Prior P(covert system present) for posterior odds");
  audit_cmd->add_flag("--paired", audit_opts.options.paired,
                      "Drive both worlds of run i from one seed");
  add_common(audit_cmd, audit_opts.common);

  SweepOpts sweep_opts;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Tradeoff table over one parameter axis");
  sweep_cmd->add_option("--spec", sweep_opts.spec_path, "Sweep spec JSON file")
      ->required();
  sweep_cmd->add_option("--table", sweep_opts.table_out,
                        "Write the TSV table here (default stdout)");
  add_common(sweep_cmd, sweep_opts.common);

  CalibrateOpts cal;
  auto* cal_cmd = app.add_subcommand(
      "calibrate", "Fit detector baselines to ordinary-world traffic");
  cal_cmd->add_option("--config", cal.config, "Preset name or JSON file")
      ->required();
  cal_cmd->add_option("--runs", cal.runs, "Baseline runs");
  cal_cmd->add_option("--budget", cal.budget,
                      "Acceptable false-alarm fraction");
  cal_cmd->add_option("--emit-config", cal.emit_config,
                      "Write the calibrated config JSON here");
  add_common(cal_cmd, cal.common);

  ReplayOpts rep;
  auto* rep_cmd = app.add_subcommand(
      "replay", "Re-score archived runs with a config's detectors");
  rep_cmd->add_option("--archive", rep.archive_dir, "Directory of run records")
      ->required();
  rep_cmd->add_option("--config", rep.config, "Preset name or JSON file")
      ->required();
  rep_cmd->add_option("--horizon", rep.horizon,
                      "Override the observation horizon (time units)");
  add_common(rep_cmd, rep.common);

  try {
    app.parse(argc, argv);
    if (presets_cmd->parsed()) return cmd_presets(presets_show, presets_dump);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (audit_cmd->parsed()) return cmd_audit(audit_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
    if (cal_cmd->parsed()) return cmd_calibrate(cal);
    if (rep_cmd->parsed()) return cmd_replay(rep);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const EstimationImpossibleError& e) {
    std::cerr << "estimation impossible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
