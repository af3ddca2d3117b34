#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "autocat/analytic.hpp"
#include "autocat/error.hpp"
#include "autocat/scaling.hpp"
#include "autocat/simulate.hpp"
#include "autocat/verify.hpp"

#ifndef AUTOCAT_VERSION
#define AUTOCAT_VERSION "0.0.0"
#endif

namespace autocat::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr Count kDefaultNMax = 30;
constexpr Count kDefaultScan = 200;
constexpr double kOracleTailTarget = 1e-8;
constexpr double kOracleTolerance = 1e-6;
constexpr std::uint64_t kDefaultMomentTrajectories = 10'000;

Json vector_spec_json(const VectorSpec& spec) {
  return std::visit([](const auto& v) { return Json(v); }, spec);
}

Json kappa_spec_json(const KappaSpec& spec) {
  return std::visit([](const auto& v) { return Json(v); }, spec);
}

Json metadata(const std::string& command, const RunConfig& run,
              const NetworkConfig& config, double wall_seconds) {
  Json meta;
  meta["command"] = command;
  meta["version"] = AUTOCAT_VERSION;
  meta["seed"] = run.seed;
  meta["config_path"] = run.config_path.string();
  meta["parameters"] = Json::parse(network_to_json(config.network));
  if (config.primed) {
    meta["volume"] = {{"V", config.volume.value_or(1.0)},
                      {"kappa_prime", kappa_spec_json(config.primed->kappa)},
                      {"lambda_prime", vector_spec_json(config.primed->lambda)},
                      {"delta_prime", vector_spec_json(config.primed->delta)}};
  }
  Json options;
  options["time"] = run.time;
  options["trajectories"] = run.trajectories;
  if (run.n) options["n"] = *run.n;
  if (run.n_max) options["n_max"] = *run.n_max;
  if (run.scan) options["scan"] = *run.scan;
  if (!run.volumes.empty()) options["volumes"] = run.volumes;
  if (run.x0) options["x0"] = *run.x0;
  options["event_cap"] = run.event_cap;
  meta["options"] = options;
  meta["argv"] = run.argv;
  meta["wall_time_seconds"] = wall_seconds;
  return meta;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Writes `body` to run.out (plus sidecar) or to `out` when no path is given.
void emit(const RunConfig& run, const NetworkConfig& config, const std::string& command,
          const std::string& body, Clock::time_point start, std::ostream& out) {
  if (!run.out) {
    out << body;
    return;
  }
  {
    std::ofstream file(*run.out, std::ios::binary);
    if (!file) throw ConfigError("cannot write output file '" + run.out->string() + "'");
    file << body;
    if (!file) throw ConfigError("failed writing '" + run.out->string() + "'");
  }
  std::ofstream side(sidecar_path(*run.out), std::ios::binary);
  if (!side) {
    throw ConfigError("cannot write metadata file '" + sidecar_path(*run.out).string() + "'");
  }
  side << metadata(command, run, config, seconds_since(start)).dump(2) << '\n';
}

State initial_state(const RunConfig& run, const ReactionNetwork& net) {
  if (!run.x0) return default_initial_state(net);
  if (static_cast<int>(run.x0->size()) != net.dimension()) {
    throw ConfigError("--x0 has " + std::to_string(run.x0->size()) +
                      " entries, network dimension is " + std::to_string(net.dimension()));
  }
  try {
    return State(*run.x0);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("--x0: ") + e.what());
  }
}

SimulationOptions sim_options(const RunConfig& run) {
  SimulationOptions opts;
  opts.event_cap = run.event_cap;
  return opts;
}

Json state_json(const State& s) {
  return Json(std::vector<Count>(s.counts().begin(), s.counts().end()));
}

std::string trajectory_json(const Trajectory& traj) {
  Json doc;
  doc["seed"] = traj.seed;
  doc["end_time"] = traj.end_time;
  Json rows = Json::array();
  rows.push_back({{"time", 0.0}, {"a", state_json(traj.initial_state)}});
  for (const TrajectoryEvent& e : traj.events) {
    rows.push_back({{"time", e.time}, {"a", state_json(e.state)}});
  }
  doc["events"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string ensemble_json(const EnsembleResult& ens) {
  Json doc;
  doc["master_seed"] = ens.config.master_seed;
  doc["end_time"] = ens.config.end_time;
  Json rows = Json::array();
  for (std::size_t k = 0; k < ens.end_states.size(); ++k) {
    rows.push_back({{"traj_id", k}, {"seed", ens.seeds[k]}, {"a", state_json(ens.end_states[k])}});
  }
  doc["end_states"] = std::move(rows);
  return doc.dump(2) + "\n";
}

Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string sweep_json(const ScalingSweep& sweep) {
  Json rows = Json::array();
  for (const ScalingRecord& r : sweep.records) {
    Json row;
    row["V"] = r.volume;
    row["mu"] = r.mu;
    row["reference_n"] = r.reference_n;
    Json alpha = Json::array();
    for (double a : r.alpha) alpha.push_back(nullable(a));
    row["alpha"] = alpha;
    row["modality"] = std::string(to_string(r.modality));
    row["flatness"] = nullable(r.flatness);
    row["corner_mass"] = nullable(r.corner_mass);
    Json mean = Json::array();
    for (double m : r.moments.mean) mean.push_back(nullable(m));
    row["mean"] = mean;
    Json cov = Json::array();
    for (double c : r.moments.cov) cov.push_back(nullable(c));
    row["cov"] = cov;
    rows.push_back(std::move(row));
  }
  return Json{{"records", rows}}.dump(2) + "\n";
}

Format data_format(const RunConfig& run) { return run.format.value_or(Format::kCsv); }

// Maps library exceptions onto the exit-code contract.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ResourceCapError& e) {
    err << "error: " << e.what() << '\n';
    return kResourceCap;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace

State default_initial_state(const ReactionNetwork& net) {
  std::vector<Count> counts;
  for (int i = 0; i < net.dimension(); ++i) {
    counts.push_back(static_cast<Count>(std::llround(net.lambda()[i] / net.delta()[i])));
  }
  return State(std::move(counts));
}

std::filesystem::path sidecar_path(const std::filesystem::path& data) {
  return std::filesystem::path(data.string() + ".meta.json");
}

int cmd_simulate(const RunConfig& run, const NetworkConfig& config, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    if (!(run.time >= 0.0) || !std::isfinite(run.time)) {
      throw ConfigError("--time must be a finite nonnegative number");
    }
    if (run.trajectories == 0) throw ConfigError("--trajectories must be at least 1");
    const State x0 = initial_state(run, config.network);
    std::ostringstream body;
    if (run.trajectories == 1) {
      const Trajectory traj =
          simulate_trajectory(config.network, x0, run.time, run.seed, sim_options(run));
      if (data_format(run) == Format::kJson) {
        body << trajectory_json(traj);
      } else {
        write_trajectory_csv(body, traj);
      }
    } else {
      const EnsembleResult ens = ensemble_sample(config.network, x0, run.time, run.trajectories,
                                                 run.seed, sim_options(run));
      if (data_format(run) == Format::kJson) {
        body << ensemble_json(ens);
      } else {
        write_ensemble_csv(body, ens);
      }
    }
    emit(run, config, "simulate", body.str(), start, out);
    return kPass;
  });
}

int cmd_verify(const RunConfig& run, const NetworkConfig& config, Check which,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    if (run.format && *run.format != Format::kJson) {
      throw ConfigError("verification reports are JSON only");
    }
    const ReactionNetwork& net = config.network;
    VerificationReport report;
    std::string name;
    switch (which) {
      case Check::kLumpability:
        name = "verify lumpability";
        report = lumpability_check(net, run.n_max.value_or(kDefaultNMax));
        break;
      case Check::kMasterEq: {
        name = "verify master-eq";
        const MixtureStationary law = stationary_law(net);
        if (run.n) {
          report = master_equation_residual(net, law.conditional, *run.n);
        } else {
          report = master_equation_sweep(net, law.conditional, 1, run.n_max.value_or(kDefaultNMax));
        }
        break;
      }
      case Check::kDrift:
        name = "verify drift";
        report = drift_report(net, run.scan.value_or(kDefaultScan));
        break;
      case Check::kOracle: {
        name = "verify oracle";
        const MixtureStationary law = stationary_law(net);
        const Count total =
            run.n_max.value_or(poisson_truncation_point(law.mu, kOracleTailTarget));
        const TruncatedStationary oracle = truncated_stationary_solve(net, total);
        const double tv = truncated_total_variation(oracle, law);
        report.check_name = "truncated_oracle";
        report.params = {{"dimension", static_cast<std::int64_t>(net.dimension())},
                         {"max_total", static_cast<std::int64_t>(total)},
                         {"mu", law.mu}};
        report.max_abs_residual = tv;
        report.max_rel_residual = tv;
        report.tolerance = kOracleTolerance;
        report.passed = tv <= kOracleTolerance;
        report.metrics = {{"total_variation", tv}, {"tail_bound", oracle.tail_bound}};
        report.notes = "total variation between the truncated-generator solution and the "
                       "closed-form law renormalized on the same set";
        break;
      }
      case Check::kMoments: {
        name = "verify moments";
        const MixtureStationary law = stationary_law(net);
        const std::uint64_t n_traj =
            run.trajectories > 1 ? run.trajectories : kDefaultMomentTrajectories;
        const EnsembleResult ens = ensemble_sample(net, initial_state(run, net), run.time, n_traj,
                                                   run.seed, sim_options(run));
        report = moment_zscore_report(ens, law, config.volume.value_or(1.0));
        break;
      }
    }
    emit(run, config, name, to_json(report) + "\n", start, out);
    return report.passed ? kPass : kCheckFailed;
  });
}

int cmd_sweep(const RunConfig& run, const NetworkConfig& config, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const auto start = Clock::now();
    if (!config.primed) throw ConfigError("sweep needs a config with a 'volume' block");
    if (run.volumes.empty()) throw ConfigError("--volumes must list at least one volume");
    const ScalingSweep sweep = scaling_sweep(*config.primed, run.volumes,
                                             config.network.dimension(),
                                             config.network.topology(), run.n);
    std::ostringstream body;
    if (data_format(run) == Format::kJson) {
      body << sweep_json(sweep);
    } else {
      write_sweep_csv(body, sweep);
    }
    emit(run, config, "sweep", body.str(), start, out);
    return kPass;
  });
}

namespace {

std::vector<double> parse_volume_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--volumes: cannot parse '" + item + "'");
    }
    if (used != item.size()) throw ConfigError("--volumes: cannot parse '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<Count> parse_state_list(const std::string& text) {
  std::vector<Count> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--x0: cannot parse '" + item + "'");
    }
    if (used != item.size()) throw ConfigError("--x0: cannot parse '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::uint64_t event_cap_from_env() {
  const char* raw = std::getenv("AUTOCAT_EVENT_CAP");
  if (raw == nullptr || *raw == '\0') return kDefaultEventCap;
  const std::string text(raw);
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("AUTOCAT_EVENT_CAP is not an unsigned integer: '" + text + "'");
  }
  if (used != text.size() || text.front() == '-') {
    throw ConfigError("AUTOCAT_EVENT_CAP is not an unsigned integer: '" + text + "'");
  }
  return v;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic autocatalytic networks: simulation, verification, volume sweeps",
               "autocat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", AUTOCAT_VERSION);

  RunConfig run;
  run.argv = args;
  std::string config_path;
  std::string volumes_text;
  std::string x0_text;
  std::string format_text;
  std::string out_path;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> n_max;
  std::optional<std::int64_t> scan;
  std::string which_text;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Network configuration (JSON)")->required();
    sub->add_option("--seed", run.seed, "Master seed");
    sub->add_option("--out", out_path, "Output file (stdout when omitted)");
    sub->add_option("--format", format_text, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Trajectory or ensemble simulation");
  common(simulate);
  simulate->add_option("--time", run.time, "End time T");
  simulate->add_option("--trajectories", run.trajectories, "Number of trajectories");
  simulate->add_option("--x0", x0_text, "Initial state, comma separated");

  CLI::App* verify = app.add_subcommand("verify", "Run one verification check");
  common(verify);
  verify->add_option("which", which_text, "lumpability|master-eq|drift|oracle|moments")
      ->required()
      ->check(CLI::IsMember({"lumpability", "master-eq", "drift", "oracle", "moments"}));
  verify->add_option("--n", n, "Single total for master-eq");
  verify->add_option("--n-max", n_max, "Largest total (lumpability, master-eq, oracle)");
  verify->add_option("--scan", scan, "Drift scan bound on |x|_1");
  verify->add_option("--time", run.time, "End time T (moments)");
  verify->add_option("--trajectories", run.trajectories, "Ensemble size (moments)");
  verify->add_option("--x0", x0_text, "Initial state (moments)");

  CLI::App* sweep = app.add_subcommand("sweep", "Volume sweep of primed parameters");
  common(sweep);
  sweep->add_option("--volumes", volumes_text, "Comma-separated volume grid")->required();
  sweep->add_option("--n", n, "Reference total (default round(mu) per volume)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForVersion&) {
    out << AUTOCAT_VERSION << '\n';
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  NetworkConfig config{create_network(1, Topology::kFullSymmetric, 0.0, 1.0, 1.0), {}, {}};
  const int setup = guarded(err, [&] {
    run.config_path = config_path;
    if (!out_path.empty()) run.out = out_path;
    if (!format_text.empty()) run.format = format_text == "json" ? Format::kJson : Format::kCsv;
    for (const auto* v : {&n, &n_max, &scan}) {
      if (*v && **v < 0) throw ConfigError("--n, --n-max and --scan must be nonnegative");
    }
    run.n = n;
    run.n_max = n_max;
    run.scan = scan;
    if (!x0_text.empty()) run.x0 = parse_state_list(x0_text);
    if (!volumes_text.empty()) run.volumes = parse_volume_list(volumes_text);
    run.event_cap = event_cap_from_env();
    config = load_network_config(run.config_path);
    return kPass;
  });
  if (setup != kPass) return setup;

  if (simulate->parsed()) return cmd_simulate(run, config, out, err);
  if (sweep->parsed()) return cmd_sweep(run, config, out, err);
  Check which = Check::kLumpability;
  if (which_text == "master-eq") which = Check::kMasterEq;
  if (which_text == "drift") which = Check::kDrift;
  if (which_text == "oracle") which = Check::kOracle;
  if (which_text == "moments") which = Check::kMoments;
  return cmd_verify(run, config, which, out, err);
}

}  // namespace autocat::cli
