#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcs/circuits.hpp"
#include "qcs/cloudsim.hpp"
#include "qcs/error.hpp"
#include "qcs/fleet.hpp"
#include "qcs/noise_oracle.hpp"
#include "qcs/predictors.hpp"
#include "qcs/scheduler.hpp"
#include "qcs/transpiler.hpp"

namespace qcs {

struct FitSettings {
  double train_fraction = 0.7;
  std::uint64_t split_seed = 7;
  int max_iter = 200;
  double tol = 1e-9;
  int cycle_stride = 1;  // use every k-th calibration cycle for the fidelity dataset
  int timing_jobs_per_machine = 60;
  std::uint64_t timing_seed = 5;
  SyntheticTiming timing;
  double runtime_floor = kDefaultRuntimeFloor;
};

struct ScenarioSettings {
  int job_count = 100;
  std::uint64_t stream_seed = 1;
  std::int64_t batch_min = 1;
  std::int64_t batch_max = 50;
  std::int64_t shots_min = 1024;
  std::int64_t shots_max = 8192;
  std::vector<PolicyKind> policies{PolicyKind::proposed, PolicyKind::only_fid, PolicyKind::only_wt};
  LoadProfile load;
  std::optional<double> qos;
  bool cc_aware = false;
  bool stagger = false;
  double exec_noise = 0.05;
  std::uint64_t exec_seed = 3;
  std::int64_t start_cycle = 1;
};

/// One experiment: fleet generation, predictor fitting and simulation
/// settings plus output locations. Every seed is explicit.
struct ExperimentConfig {
  FleetSpec fleet;
  std::string fleet_path;  // empty: <out_dir>/fleet.json
  FitSettings fit;
  ScenarioSettings scenario;
  UtilityConfig utility;
  std::string out_dir = "out";

  [[nodiscard]] std::string resolved_fleet_path() const {
    return fleet_path.empty() ? (std::filesystem::path(out_dir) / "fleet.json").string() : fleet_path;
  }
  [[nodiscard]] std::string out_file(const std::string& name) const {
    return (std::filesystem::path(out_dir) / name).string();
  }
};

namespace detail {

/// Strict reader over one JSON object: rejects unknown keys and reports the
/// dotted path of any field with the wrong type.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("config: '" + where() + "' must be an object");
  }
  ~ObjectReader() = default;
  ObjectReader(const ObjectReader&) = delete;
  ObjectReader& operator=(const ObjectReader&) = delete;

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config: field '" + field(key) + "': " + e.what());
    }
  }

  void read_optional(const char* key, std::optional<double>& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (it->is_null()) {
      out.reset();
      return;
    }
    double v = 0.0;
    read(key, v);
    out = v;
  }

  const nlohmann::json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  [[nodiscard]] std::string field(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError("config: unknown field '" + field(k.c_str()) + "'");
  }

 private:
  [[nodiscard]] std::string where() const { return path_.empty() ? "<root>" : path_; }

  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline void read_range(ObjectReader& r, const char* key, ErrorRange& out) {
  if (const auto* j = r.child(key)) {
    if (!j->is_array() || j->size() != 2 || !(*j)[0].is_number() || !(*j)[1].is_number())
      throw ConfigError("config: field '" + r.field(key) + "' must be [min, max]");
    out = {(*j)[0].get<double>(), (*j)[1].get<double>()};
  }
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  detail::ObjectReader root(doc, "");
  root.read("out_dir", cfg.out_dir);
  root.read("fleet_path", cfg.fleet_path);

  if (const auto* j = root.child("fleet")) {
    detail::ObjectReader r(*j, "fleet");
    auto& f = cfg.fleet;
    r.read("machine_count", f.machine_count);
    r.read("qubit_count_choices", f.qubit_count_choices);
    detail::read_range(r, "readout_error", f.readout);
    detail::read_range(r, "cx_error", f.cx);
    detail::read_range(r, "single_qubit_error", f.single_qubit);
    r.read("cycles", f.cycles);
    r.read("calibration_period_s", f.calibration_period);
    r.read("stagger", f.stagger);
    r.read("rng_seed", f.rng_seed);
    r.read("machine_spread", f.machine_spread);
    r.read("poor_fraction", f.poor_fraction);
    r.finish();
  }
  if (const auto* j = root.child("fit")) {
    detail::ObjectReader r(*j, "fit");
    auto& f = cfg.fit;
    r.read("train_fraction", f.train_fraction);
    r.read("split_seed", f.split_seed);
    r.read("max_iter", f.max_iter);
    r.read("tol", f.tol);
    r.read("cycle_stride", f.cycle_stride);
    r.read("timing_jobs_per_machine", f.timing_jobs_per_machine);
    r.read("timing_seed", f.timing_seed);
    r.read("runtime_floor_s", f.runtime_floor);
    if (const auto* t = r.child("timing")) {
      detail::ObjectReader tr(*t, "fit.timing");
      tr.read("per_circuit_scale", f.timing.per_circuit_scale);
      tr.read("circuit_overhead_s", f.timing.circuit_overhead_s);
      tr.read("per_shot_s", f.timing.per_shot_s);
      tr.read("per_qubit", f.timing.per_qubit);
      tr.read("noise", f.timing.noise);
      tr.finish();
    }
    r.finish();
  }
  if (const auto* j = root.child("scenario")) {
    detail::ObjectReader r(*j, "scenario");
    auto& s = cfg.scenario;
    r.read("job_count", s.job_count);
    r.read("stream_seed", s.stream_seed);
    r.read("batch_min", s.batch_min);
    r.read("batch_max", s.batch_max);
    r.read("shots_min", s.shots_min);
    r.read("shots_max", s.shots_max);
    std::vector<std::string> policies;
    r.read("policies", policies);
    if (!policies.empty()) {
      s.policies.clear();
      for (const auto& p : policies) s.policies.push_back(policy_kind_from_string(p));
    }
    std::string load;
    r.read("load", load);
    if (!load.empty()) s.load.kind = load_kind_from_string(load);
    r.read("max_queue_s", s.load.max_queue);
    r.read("filler_seed", s.load.filler_seed);
    r.read("sustain_load", s.load.sustain);
    r.read_optional("qos_s", s.qos);
    r.read("cc_aware", s.cc_aware);
    r.read("stagger", s.stagger);
    r.read("exec_noise", s.exec_noise);
    r.read("exec_seed", s.exec_seed);
    r.read("start_cycle", s.start_cycle);
    r.finish();
  }
  if (const auto* j = root.child("utility")) {
    detail::ObjectReader r(*j, "utility");
    auto& u = cfg.utility;
    r.read("w_fid", u.w_fid);
    r.read("w_wait", u.w_wait);
    r.read("w_qos", u.w_qos);
    r.read("w_cc", u.w_cc);
    r.read("qos_penalty", u.qos_penalty);
    r.read("cc_penalty", u.cc_penalty);
    r.read("wait_normalizer_s", u.wait_normalizer);
    r.finish();
  }
  root.finish();

  try {
    validate(cfg.fleet);
    validate(cfg.utility);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(cfg.fit.train_fraction > 0.0 && cfg.fit.train_fraction < 1.0))
    throw ConfigError("config: field 'fit.train_fraction' must be in (0, 1)");
  if (cfg.fit.cycle_stride < 1) throw ConfigError("config: field 'fit.cycle_stride' must be >= 1");
  if (cfg.fit.timing_jobs_per_machine < 1) throw ConfigError("config: field 'fit.timing_jobs_per_machine' must be >= 1");
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// ---------------------------------------------------------------------------
// Datasets

struct FidelityDataset {
  std::vector<Sample> samples;
  std::vector<std::size_t> machine_of;  // fleet index of each sample
};

/// Every standard benchmark compiled on every machine that can hold it, for
/// every cycle_stride-th calibration cycle; target is the analytic POS.
inline FidelityDataset build_fidelity_dataset(const std::vector<Machine>& fleet, int cycle_stride = 1) {
  FidelityDataset ds;
  std::vector<Circuit> circuits;
  for (const auto& b : standard_benchmarks()) circuits.push_back(build_benchmark(b.name, b.params));
  for (std::size_t mi = 0; mi < fleet.size(); ++mi) {
    const auto& m = fleet[mi];
    for (std::size_t k = 0; k < m.snapshots.size(); k += static_cast<std::size_t>(cycle_stride)) {
      const auto& snap = m.snapshots[k];
      for (const auto& c : circuits) {
        if (c.width > m.n_qubits) continue;
        const auto comp = compile_for(c, m, static_cast<Timestamp>(snap.valid_from));
        ds.samples.push_back({comp.features.values(), analytic_pos(comp.circuit, snap).pos});
        ds.machine_of.push_back(mi);
      }
    }
  }
  return ds;
}

struct TimingDataset {
  std::vector<Sample> samples;
  std::vector<std::size_t> machine_of;
};

/// Synthetic execution times: random batches and shot counts over the
/// benchmarks each machine can hold, timed by the ground-truth law.
inline TimingDataset build_timing_dataset(const std::vector<Machine>& fleet, const FitSettings& fs) {
  TimingDataset ds;
  std::vector<Circuit> circuits;
  for (const auto& b : standard_benchmarks()) circuits.push_back(build_benchmark(b.name, b.params));
  for (std::size_t mi = 0; mi < fleet.size(); ++mi) {
    const auto& m = fleet[mi];
    Rng rng(mix_seed(fs.timing_seed, mi));
    std::vector<CompiledCircuit> compiled;
    for (const auto& c : circuits)
      if (c.width <= m.n_qubits)
        compiled.push_back(compile_for(c, m, static_cast<Timestamp>(m.snapshots.front().valid_from)).circuit);
    for (int k = 0; k < fs.timing_jobs_per_machine; ++k) {
      JobRuntimeFeatures jf;
      jf.batch_size = static_cast<double>(uniform_int(rng, 1, 75));
      jf.shots = static_cast<double>(uniform_int(rng, 1024, 8192));
      if (!compiled.empty()) {
        const auto& cc = compiled[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(compiled.size()) - 1))];
        jf.depth = cc.depth;
        jf.width = static_cast<double>(cc.initial_mapping.logical_to_physical.size());
        jf.total_gates = static_cast<double>(cc.physical_gates.size());
      } else {
        jf.depth = static_cast<double>(uniform_int(rng, 1, 50));
        jf.width = 1;
        jf.total_gates = jf.depth;
      }
      jf.machine_size = m.n_qubits;
      jf.memory_slots = memory_slots_for(jf.batch_size);
      ds.samples.push_back({jf.values(), fs.timing.draw(jf, rng)});
      ds.machine_of.push_back(mi);
    }
  }
  return ds;
}

struct FitOutcome {
  FitReport fidelity;
  FitReport runtime;
  std::map<std::string, double> feature_pearson;  // |r| of each raw feature vs POS, test split
  std::vector<std::pair<std::string, double>> runtime_machine_pearson;  // per machine, test split
  std::vector<std::pair<std::string, double>> fidelity_machine_pearson;
  std::size_t fidelity_samples = 0;
  std::size_t timing_samples = 0;

  [[nodiscard]] int runtime_machines_below(double threshold) const {
    int n = 0;
    for (const auto& [id, r] : runtime_machine_pearson)
      if (!(r >= threshold)) ++n;
    return n;
  }
};

namespace detail {

inline std::vector<std::pair<std::string, double>> per_machine_pearson(const std::vector<Machine>& fleet,
                                                                       const std::vector<Sample>& samples,
                                                                       const std::vector<std::size_t>& machine_of,
                                                                       const FitReport& rep) {
  std::vector<std::vector<double>> pred(fleet.size());
  std::vector<std::vector<double>> actual(fleet.size());
  for (std::size_t k : rep.test_indices) {
    pred[machine_of[k]].push_back(predict(rep.model, samples[k].x));
    actual[machine_of[k]].push_back(samples[k].y);
  }
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t mi = 0; mi < fleet.size(); ++mi) {
    const double r = pred[mi].size() >= 2 ? pearson_or_nan(pred[mi], actual[mi]) : std::numeric_limits<double>::quiet_NaN();
    out.emplace_back(fleet[mi].id, r);
  }
  return out;
}

}  // namespace detail

inline FitOutcome fit_models(const std::vector<Machine>& fleet, const FitSettings& fs) {
  FitOutcome out;
  const FitOptions opt{fs.train_fraction, fs.split_seed, fs.max_iter, fs.tol};

  const auto fid = build_fidelity_dataset(fleet, fs.cycle_stride);
  out.fidelity_samples = fid.samples.size();
  out.fidelity = fit_product_linear(fid.samples, FeatureVector::names(), opt);
  std::vector<double> actual;
  for (std::size_t k : out.fidelity.test_indices) actual.push_back(fid.samples[k].y);
  for (std::size_t i = 0; i < FeatureVector::names().size(); ++i) {
    std::vector<double> xs;
    for (std::size_t k : out.fidelity.test_indices) xs.push_back(fid.samples[k].x[i]);
    const double r = pearson_or_nan(xs, actual);
    out.feature_pearson[FeatureVector::names()[i]] = std::isfinite(r) ? std::abs(r) : 0.0;
  }
  out.fidelity_machine_pearson = detail::per_machine_pearson(fleet, fid.samples, fid.machine_of, out.fidelity);

  const auto timing = build_timing_dataset(fleet, fs);
  out.timing_samples = timing.samples.size();
  out.runtime = fit_product_linear(timing.samples, JobRuntimeFeatures::names(), opt);
  out.runtime_machine_pearson = detail::per_machine_pearson(fleet, timing.samples, timing.machine_of, out.runtime);
  return out;
}

inline nlohmann::json fit_summary_json(const FitOutcome& f) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json feat = nlohmann::json::object();
  for (const auto& [k, v] : f.feature_pearson) feat[k] = v;
  nlohmann::json fid_machines = nlohmann::json::object();
  for (const auto& [id, r] : f.fidelity_machine_pearson) fid_machines[id] = num(r);
  nlohmann::json rt_machines = nlohmann::json::object();
  for (const auto& [id, r] : f.runtime_machine_pearson) rt_machines[id] = num(r);
  return {{"fidelity",
           {{"samples", f.fidelity_samples},
            {"train_pearson", num(f.fidelity.train_pearson)},
            {"tuned_pearson", num(f.fidelity.test_pearson)},
            {"feature_pearson", feat},
            {"per_machine_pearson", fid_machines}}},
          {"runtime",
           {{"samples", f.timing_samples},
            {"train_pearson", num(f.runtime.train_pearson)},
            {"test_pearson", num(f.runtime.test_pearson)},
            {"per_machine_pearson", rt_machines},
            {"machines_below_0_95", f.runtime_machines_below(0.95)}}}};
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline void write_text(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace detail

/// Writes the synthetic fleet; returns its path.
inline std::string cmd_gen_fleet(const ExperimentConfig& cfg) {
  const auto path = cfg.resolved_fleet_path();
  detail::write_text(path, fleet_to_string(generate_synthetic_fleet(cfg.fleet)));
  return path;
}

inline FitOutcome cmd_fit(const ExperimentConfig& cfg) {
  const auto fleet = fleet_from_string(detail::read_text(cfg.resolved_fleet_path()));
  auto outcome = fit_models(fleet, cfg.fit);
  detail::write_text(cfg.out_file("fidelity_model.json"), to_json_value(outcome.fidelity).dump(2) + "\n");
  detail::write_text(cfg.out_file("runtime_model.json"), to_json_value(outcome.runtime).dump(2) + "\n");
  detail::write_text(cfg.out_file("fit_report.json"), fit_summary_json(outcome).dump(2) + "\n");
  return outcome;
}

inline Scenario make_scenario(const ExperimentConfig& cfg, std::vector<Machine> fleet, Models models) {
  Scenario sc;
  const auto& s = cfg.scenario;
  sc.fleet = std::move(fleet);
  sc.models = std::move(models);
  sc.job_count = s.job_count;
  sc.stream_seed = s.stream_seed;
  sc.batch_min = s.batch_min;
  sc.batch_max = s.batch_max;
  sc.shots_min = s.shots_min;
  sc.shots_max = s.shots_max;
  sc.policies = s.policies;
  sc.utility = cfg.utility;
  sc.load = s.load;
  sc.qos = s.qos;
  sc.cc_aware = s.cc_aware;
  sc.stagger = s.stagger;
  sc.exec_noise = s.exec_noise;
  sc.exec_seed = s.exec_seed;
  sc.start_cycle = s.start_cycle;
  return sc;
}

inline ComparisonReport cmd_simulate(const ExperimentConfig& cfg) {
  const auto fleet = fleet_from_string(detail::read_text(cfg.resolved_fleet_path()));
  Models models;
  models.fidelity = load_model(cfg.out_file("fidelity_model.json")).model;
  models.runtime = load_model(cfg.out_file("runtime_model.json")).model;
  models.runtime_floor = cfg.fit.runtime_floor;
  const auto sc = make_scenario(cfg, fleet, models);
  validate(sc);
  ComparisonReport rep = sc.policies.size() >= 2 ? compare_policies(sc) : ComparisonReport{run(sc), {}};
  detail::write_text(cfg.out_file("trace.csv"), trace_csv(rep.traces));
  detail::write_text(cfg.out_file("aggregates.json"), aggregate_json(rep).dump(2) + "\n");
  detail::write_text(cfg.out_file("series.json"), series_json(rep).dump() + "\n");
  return rep;
}

// ---------------------------------------------------------------------------
// Reports over trace CSV files

struct RunSummary {
  std::string path;
  std::map<std::string, Aggregates> policies;
  std::map<std::string, double> ratios;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace detail

/// Recomputes per-policy aggregates from a trace CSV.
inline RunSummary summarize_trace(const std::string& path) {
  std::istringstream in(detail::read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatchError("'" + path + "': empty trace file");
  const auto header = detail::split_csv_line(line);
  if (header != trace_columns()) throw SchemaMismatchError("'" + path + "': unexpected trace columns");
  std::map<std::string, std::vector<JobRecord>> by_policy;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto c = detail::split_csv_line(line);
    if (c.size() != header.size() || c[0] != kTraceSchemaVersion)
      throw SchemaMismatchError("'" + path + "' row " + std::to_string(row) + ": schema mismatch");
    JobRecord r;
    try {
      r.job_id = c[1];
      r.policy = c[2];
      r.wait = std::stod(c[8]);
      r.pos = std::stod(c[10]);
      r.crossover = c[11] == "1";
      if (!c[12].empty()) r.qos_met = c[12] == "1";
      r.qos_feasible_at_decision = c[17] == "1";
    } catch (const std::logic_error&) {
      throw SchemaMismatchError("'" + path + "' row " + std::to_string(row) + ": bad numeric field");
    }
    by_policy[r.policy].push_back(std::move(r));
  }
  RunSummary s;
  s.path = path;
  for (const auto& [policy, records] : by_policy) s.policies[policy] = aggregate(records);
  s.ratios = policy_ratios(s.policies);
  return s;
}

struct ReportResult {
  std::vector<RunSummary> runs;
  /// run k vs run 0, keyed "<policy>.<metric>", one map per run after the first
  std::vector<std::map<std::string, double>> cross_run;
};

inline ReportResult cmd_report(const std::vector<std::string>& paths) {
  if (paths.empty()) throw ValidationError("report: need at least one trace file");
  ReportResult res;
  for (const auto& p : paths) res.runs.push_back(summarize_trace(p));
  const auto& base = res.runs.front();
  for (std::size_t k = 1; k < res.runs.size(); ++k) {
    std::map<std::string, double> r;
    for (const auto& [policy, agg] : res.runs[k].policies) {
      auto it = base.policies.find(policy);
      if (it == base.policies.end()) continue;
      r[policy + ".mean_pos"] = safe_ratio(agg.mean_pos, it->second.mean_pos);
      r[policy + ".mean_wait"] = safe_ratio(agg.mean_wait, it->second.mean_wait);
    }
    res.cross_run.push_back(std::move(r));
  }
  return res;
}

inline nlohmann::json to_json_value(const ReportResult& res) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& run : res.runs) {
    nlohmann::json pol = nlohmann::json::object();
    for (const auto& [name, agg] : run.policies) pol[name] = to_json_value(agg);
    runs.push_back({{"path", run.path}, {"policies", pol}, {"ratios", run.ratios}});
  }
  return {{"runs", runs}, {"cross_run_ratios", res.cross_run}};
}

inline std::string format_report(const ReportResult& res) {
  std::ostringstream os;
  os << std::fixed;
  for (const auto& run : res.runs) {
    os << run.path << "\n";
    os << "  " << std::left << std::setw(10) << "policy" << std::right << std::setw(8) << "jobs" << std::setw(12)
       << "mean_pos" << std::setw(14) << "mean_wait_s" << std::setw(11) << "crossover" << std::setw(8) << "qos_v"
       << "\n";
    for (const auto& [name, a] : run.policies) {
      os << "  " << std::left << std::setw(10) << name << std::right << std::setw(8) << a.jobs << std::setw(12)
         << std::setprecision(4) << a.mean_pos << std::setw(14) << std::setprecision(1) << a.mean_wait
         << std::setw(11) << a.crossover_count << std::setw(8) << a.qos_violations << "\n";
    }
    for (const auto& [k, v] : run.ratios) os << "  " << k << " = " << std::setprecision(4) << v << "\n";
  }
  for (std::size_t k = 0; k < res.cross_run.size(); ++k) {
    os << "run " << (k + 1) << " vs run 0\n";
    for (const auto& [key, v] : res.cross_run[k]) os << "  " << key << " = " << std::setprecision(4) << v << "\n";
  }
  return os.str();
}

}  // namespace qcs
