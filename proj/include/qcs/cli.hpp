#pragma once

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcs/experiment.hpp"

namespace qcs {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitMissingArtifact = 3,
  kExitValidation = 4,
};

/// Command-line values that win over the config file.
struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::vector<std::string> policies;
  std::optional<std::string> load;
  std::optional<double> qos;
  bool cc_aware = false;
  bool stagger = false;
};

/// --seed reseeds what the command draws: the fleet for gen-fleet, the split
/// and timing set for fit, the job stream, fillers and exec noise for simulate.
inline void apply_overrides(ExperimentConfig& cfg, const CliOverrides& o, const std::string& command) {
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.seed) {
    const std::uint64_t s = *o.seed;
    if (command == "gen-fleet") {
      cfg.fleet.rng_seed = s;
    } else if (command == "fit") {
      cfg.fit.split_seed = mix_seed(s, 1);
      cfg.fit.timing_seed = mix_seed(s, 2);
    } else if (command == "simulate") {
      cfg.scenario.stream_seed = mix_seed(s, 1);
      cfg.scenario.load.filler_seed = mix_seed(s, 2);
      cfg.scenario.exec_seed = mix_seed(s, 3);
    }
  }
  if (!o.policies.empty()) {
    cfg.scenario.policies.clear();
    for (const auto& p : o.policies) cfg.scenario.policies.push_back(policy_kind_from_string(p));
  }
  if (o.load) cfg.scenario.load.kind = load_kind_from_string(*o.load);
  if (o.qos) {
    if (*o.qos < 0.0) throw ConfigError("--qos must be non-negative");
    cfg.scenario.qos = *o.qos;
  }
  if (o.cc_aware) cfg.scenario.cc_aware = true;
  if (o.stagger) cfg.scenario.stagger = true;
}

namespace detail {

inline int run_command(const std::string& command, const std::optional<std::string>& config_path,
                       const CliOverrides& o, const std::vector<std::string>& traces, std::ostream& out) {
  if (command == "report") {
    const auto res = cmd_report(traces);
    out << format_report(res);
    if (o.out_dir) {
      const auto path = (std::filesystem::path(*o.out_dir) / "report.json").string();
      write_text(path, to_json_value(res).dump(2) + "\n");
      out << "wrote " << path << "\n";
    }
    return kExitOk;
  }

  ExperimentConfig cfg = config_path ? load_config(*config_path) : ExperimentConfig{};
  apply_overrides(cfg, o, command);

  if (command == "gen-fleet") {
    out << "wrote " << cmd_gen_fleet(cfg) << "\n";
  } else if (command == "fit") {
    const auto f = cmd_fit(cfg);
    out << std::fixed << std::setprecision(4) << "fidelity test pearson " << f.fidelity.test_pearson
        << "\nruntime test pearson " << f.runtime.test_pearson << "\nruntime machines below 0.95: "
        << f.runtime_machines_below(0.95) << "\nwrote " << cfg.out_file("fit_report.json") << "\n";
  } else if (command == "simulate") {
    const auto rep = cmd_simulate(cfg);
    out << std::fixed;
    for (const auto& t : rep.traces)
      out << std::left << std::setw(10) << t.policy << std::right << " mean_pos " << std::setprecision(4)
          << t.aggregates.mean_pos << " mean_wait_s " << std::setprecision(1) << t.aggregates.mean_wait
          << " crossovers " << t.aggregates.crossover_count << " qos_violations " << t.aggregates.qos_violations
          << "\n";
    out << "wrote " << cfg.out_file("trace.csv") << "\n";
  }
  return kExitOk;
}

}  // namespace detail

/// Parses arguments, runs one subcommand and maps errors onto exit codes.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Quantum cloud scheduling simulator"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  CliOverrides o;
  std::vector<std::string> traces;
  std::string command;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config (JSON)");
    sub->add_option("--seed", o.seed, "seed override for this command");
    sub->add_option("--out", o.out_dir, "output directory");
  };
  auto add_scenario = [&](CLI::App* sub) {
    sub->add_option("--policy", o.policies, "policy to run (repeatable)")
        ->check(CLI::IsMember({"proposed", "only_fid", "only_wt"}));
    sub->add_option("--load", o.load, "load profile")->check(CLI::IsMember({"low", "high", "random"}));
    sub->add_option("--qos", o.qos, "QOS bound in seconds for every job");
    sub->add_flag("--cc-aware", o.cc_aware, "penalize predicted calibration crossovers");
    sub->add_flag("--stagger", o.stagger, "stagger calibration boundaries across machines");
  };

  auto* gen = app.add_subcommand("gen-fleet", "generate the synthetic fleet");
  add_common(gen);
  auto* fit = app.add_subcommand("fit", "fit the fidelity and runtime predictors");
  add_common(fit);
  auto* sim = app.add_subcommand("simulate", "run the policy comparison");
  add_common(sim);
  add_scenario(sim);
  auto* rep = app.add_subcommand("report", "summarize trace files");
  rep->add_option("--out", o.out_dir, "directory for report.json");
  rep->add_option("traces", traces, "trace.csv files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }
  for (auto* sub : {gen, fit, sim, rep})
    if (sub->parsed()) command = sub->get_name();

  try {
    return detail::run_command(command, config_path, o, traces, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MissingArtifactError& e) {
    err << "missing artifact: " << e.what() << "\n";
    return kExitMissingArtifact;
  } catch (const Error& e) {
    err << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace qcs
