#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcs/circuits.hpp"
#include "qcs/error.hpp"
#include "qcs/fleet.hpp"
#include "qcs/noise_oracle.hpp"
#include "qcs/predictors.hpp"
#include "qcs/random.hpp"
#include "qcs/scheduler.hpp"
#include "qcs/transpiler.hpp"

namespace qcs {

enum class LoadKind { low, high, random };

inline const char* to_string(LoadKind k) {
  switch (k) {
    case LoadKind::low: return "low";
    case LoadKind::high: return "high";
    case LoadKind::random: return "random";
  }
  return "?";
}

inline LoadKind load_kind_from_string(const std::string& s) {
  if (s == "low") return LoadKind::low;
  if (s == "high") return LoadKind::high;
  if (s == "random") return LoadKind::random;
  throw ConfigError("unknown load profile '" + s + "' (expected low, high or random)");
}

struct LoadProfile {
  LoadKind kind = LoadKind::low;
  double max_queue = 86400.0;  // Q_max
  std::uint64_t filler_seed = 11;
  /// Background load persists: each filler that starts is re-queued at the
  /// tail, so the filler backlog ahead of new arrivals stays at its seeded level.
  bool sustain = true;
};

/// Fraction-of-Q_max band for the initial estimated queue; `upper_inclusive`
/// is false only for the low band.
struct LoadBand {
  double lower = 0.0;
  double upper = 0.1;
  bool upper_inclusive = false;
};

inline LoadBand load_band(LoadKind kind) {
  switch (kind) {
    case LoadKind::low: return {0.0, 0.1, false};
    case LoadKind::high: return {0.5, 1.0, true};
    case LoadKind::random: return {0.01, 1.0, true};
  }
  return {};
}

/// A job sitting in (or running on) a machine queue.
struct QueuedJob {
  bool filler = true;
  std::size_t job_index = 0;  // into the stream, for non-filler jobs
  JobRuntimeFeatures features;
  double predicted_exec = 0.0;
  double actual_exec = 0.0;
  Timestamp enqueue_time = 0.0;
};

struct RunningJob {
  QueuedJob job;
  Timestamp start_time = 0.0;
  Timestamp finish_time = 0.0;
};

struct MachineState {
  std::string machine_id;
  std::optional<RunningJob> running;
  std::deque<QueuedJob> queue;
  std::int64_t completed = 0;
  bool sustain = false;
};

/// Predicted queue time Q_M at `now`.
inline double predicted_queue_time(const MachineState& ms, const Models& models, Timestamp now) {
  double remaining = 0.0;
  if (ms.running)
    remaining = std::max(0.0, ms.running->start_time + ms.running->job.predicted_exec - now);
  std::vector<JobRuntimeFeatures> queued;
  queued.reserve(ms.queue.size());
  for (const auto& q : ms.queue) queued.push_back(q.features);
  return estimate_queue_time(queued, models.runtime, remaining, models.runtime_floor);
}

namespace detail {

inline QueuedJob make_filler(Rng& rng, const Machine& m, const Models& models, double noise, std::int64_t batch,
                             std::int64_t shots) {
  QueuedJob q;
  q.filler = true;
  auto& f = q.features;
  f.batch_size = static_cast<double>(batch);
  f.shots = static_cast<double>(shots);
  f.width = static_cast<double>(uniform_int(rng, 1, std::min(m.n_qubits, 6)));
  f.depth = static_cast<double>(uniform_int(rng, 1, 200));
  f.total_gates = f.depth * static_cast<double>(uniform_int(rng, 1, static_cast<std::int64_t>(f.width)));
  f.machine_size = m.n_qubits;
  f.memory_slots = memory_slots_for(f.batch_size);
  q.predicted_exec = predict_exec_time(models.runtime, f, models.runtime_floor);
  q.actual_exec = q.predicted_exec * (1.0 + uniform_real(rng, -noise, noise));
  return q;
}

}  // namespace detail

/// Pre-fills every machine queue with filler jobs (batch 1-75, shots
/// 1024-8192) until the estimated queue lands in the profile's band. Machine i
/// draws from its own stream mix_seed(filler_seed, i).
inline std::vector<MachineState> seed_load(const std::vector<Machine>& fleet, const LoadProfile& profile,
                                           const Models& models, double exec_noise = 0.0) {
  if (!(profile.max_queue > 0.0)) throw ValidationError("load profile: max_queue must be positive");
  const LoadBand band = load_band(profile.kind);
  const double lower = band.lower * profile.max_queue;
  const double upper = band.upper * profile.max_queue;
  auto fits = [&](double est) { return band.upper_inclusive ? est <= upper : est < upper; };

  std::vector<MachineState> states;
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    const Machine& m = fleet[i];
    Rng rng(mix_seed(profile.filler_seed, i));
    MachineState ms;
    ms.machine_id = m.id;
    ms.sustain = profile.sustain;
    const double target = uniform_real(rng, lower, upper);
    double est = 0.0;
    for (;;) {
      auto f = detail::make_filler(rng, m, models, exec_noise, uniform_int(rng, 1, 75), uniform_int(rng, 1024, 8192));
      if (est + f.predicted_exec > target) break;
      est += f.predicted_exec;
      ms.queue.push_back(std::move(f));
    }
    // top up to the lower edge with fillers shrunk until they fit the band
    while (est < lower) {
      std::int64_t batch = uniform_int(rng, 1, 75);
      std::int64_t shots = uniform_int(rng, 1024, 8192);
      auto f = detail::make_filler(rng, m, models, exec_noise, batch, shots);
      while (!fits(est + f.predicted_exec) && (batch > 1 || shots > 1024)) {
        batch = std::max<std::int64_t>(1, batch / 2);
        if (batch == 1) shots = std::max<std::int64_t>(1024, shots / 2);
        f = detail::make_filler(rng, m, models, exec_noise, batch, shots);
      }
      if (!fits(est + f.predicted_exec)) break;
      est += f.predicted_exec;
      ms.queue.push_back(std::move(f));
    }
    states.push_back(std::move(ms));
  }
  return states;
}

// ---------------------------------------------------------------------------
// Scenario and traces

struct Scenario {
  std::vector<Machine> fleet;
  Models models;
  int job_count = 100;
  std::uint64_t stream_seed = 1;
  std::int64_t batch_min = 1;
  std::int64_t batch_max = 50;
  std::int64_t shots_min = 1024;
  std::int64_t shots_max = 8192;
  std::vector<PolicyKind> policies{PolicyKind::proposed, PolicyKind::only_fid, PolicyKind::only_wt};
  UtilityConfig utility;
  LoadProfile load;
  std::optional<double> qos;  // max wait in seconds, applied to every stream job
  bool cc_aware = false;
  bool stagger = false;
  double exec_noise = 0.05;
  std::uint64_t exec_seed = 3;
  std::int64_t start_cycle = 1;  // arrivals span one period starting at this cycle
};

inline void validate(const Scenario& sc) {
  if (sc.fleet.empty()) throw ValidationError("scenario: fleet is empty");
  if (sc.job_count < 0) throw ValidationError("scenario: job_count must be >= 0");
  if (sc.batch_min < 1 || sc.batch_max < sc.batch_min) throw ValidationError("scenario: bad batch range");
  if (sc.shots_min < 1 || sc.shots_max < sc.shots_min) throw ValidationError("scenario: bad shots range");
  if (sc.policies.empty()) throw ValidationError("scenario: no policies");
  if (!(sc.exec_noise >= 0.0 && sc.exec_noise < 1.0)) throw ValidationError("scenario: exec_noise must be in [0, 1)");
  if (sc.qos && *sc.qos < 0.0) throw ValidationError("scenario: qos must be non-negative");
  if (sc.start_cycle < 0) throw ValidationError("scenario: start_cycle must be >= 0");
  validate(sc.utility);
  for (const auto& m : sc.fleet)
    if (m.calibration_period != sc.fleet.front().calibration_period)
      throw ValidationError("scenario: machines must share one calibration period");
  if (sc.models.fidelity.size() != FeatureVector::names().size())
    throw ValidationError("scenario: fidelity model must have 4 terms");
  if (sc.models.runtime.size() != JobRuntimeFeatures::names().size())
    throw ValidationError("scenario: runtime model must have 7 terms");
}

struct JobRecord {
  std::string job_id;
  std::string policy;
  std::string machine_id;
  std::string benchmark;
  std::int64_t batch_size = 0;
  Timestamp submit_time = 0.0;
  Timestamp start_time = 0.0;
  double wait = 0.0;
  double exec = 0.0;
  double pos = 0.0;
  bool crossover = false;
  std::optional<bool> qos_met;
  double predicted_fidelity = 0.0;
  double predicted_wait = 0.0;
  double predicted_exec = 0.0;
  bool crossover_predicted = false;
  bool qos_feasible_at_decision = false;  // some candidate met the QOS bound
  std::int64_t compile_cycle = 0;
  std::int64_t exec_cycle = 0;
};

struct Aggregates {
  std::int64_t jobs = 0;
  double mean_pos = 0.0;
  double mean_wait = 0.0;
  std::int64_t crossover_count = 0;
  std::int64_t qos_violations = 0;
  std::int64_t qos_violations_when_feasible = 0;

  [[nodiscard]] double crossover_rate() const { return jobs > 0 ? static_cast<double>(crossover_count) / jobs : 0.0; }
};

struct TraceMetrics {
  std::string policy;
  std::vector<JobRecord> records;  // in job-id order
  Aggregates aggregates;
  std::int64_t arrivals = 0;
  std::int64_t completions = 0;
  std::int64_t calibration_events = 0;
};

inline Aggregates aggregate(const std::vector<JobRecord>& records) {
  Aggregates a;
  a.jobs = static_cast<std::int64_t>(records.size());
  if (records.empty()) return a;
  double pos = 0.0;
  double wait = 0.0;
  for (const auto& r : records) {
    pos += r.pos;
    wait += r.wait;
    if (r.crossover) ++a.crossover_count;
    if (r.qos_met && !*r.qos_met) {
      ++a.qos_violations;
      if (r.qos_feasible_at_decision) ++a.qos_violations_when_feasible;
    }
  }
  a.mean_pos = pos / static_cast<double>(records.size());
  a.mean_wait = wait / static_cast<double>(records.size());
  return a;
}

/// Stream job with its benchmark name, for records.
struct StreamJob {
  Job job;
  std::string benchmark;
};

/// Jobs drawn uniformly from the standard benchmarks, arriving at uniform
/// random times over one calibration period starting at start_cycle.
inline std::vector<StreamJob> generate_job_stream(const Scenario& sc) {
  Rng rng(sc.stream_seed);
  const auto period = static_cast<double>(sc.fleet.front().calibration_period);
  const double t0 = static_cast<double>(sc.start_cycle) * period;
  const auto& benches = standard_benchmarks();
  std::vector<StreamJob> jobs;
  for (int i = 0; i < sc.job_count; ++i) {
    const auto& spec = benches[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(benches.size()) - 1))];
    StreamJob sj;
    sj.benchmark = spec.name;
    const auto batch = uniform_int(rng, sc.batch_min, sc.batch_max);
    const Circuit c = build_benchmark(spec.name, spec.params);
    sj.job.circuits.assign(static_cast<std::size_t>(batch), c);
    sj.job.representative_index = 0;
    sj.job.shots = uniform_int(rng, sc.shots_min, sc.shots_max);
    sj.job.qos_max_wait = sc.qos;
    sj.job.submit_time = t0 + std::floor(uniform_real(rng, 0.0, period));
    jobs.push_back(std::move(sj));
  }
  std::stable_sort(jobs.begin(), jobs.end(),
                   [](const StreamJob& a, const StreamJob& b) { return a.job.submit_time < b.job.submit_time; });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    std::ostringstream id;
    id << "job-" << std::setw(4) << std::setfill('0') << i;
    jobs[i].job.id = id.str();
  }
  return jobs;
}

inline UtilityConfig effective_utility(const Scenario& sc) {
  UtilityConfig cfg = sc.utility;
  if (!sc.cc_aware) cfg.w_cc = 0;
  return cfg;
}

namespace detail {

enum class EventKind { calibration = 0, finish = 1, arrival = 2 };

struct Event {
  Timestamp time = 0.0;
  EventKind kind = EventKind::arrival;
  std::uint64_t seq = 0;
  std::size_t target = 0;  // machine index or job index

  // min-heap on (time, kind, seq): boundaries first, then finishes, then arrivals
  bool operator>(const Event& o) const {
    return std::tuple(time, static_cast<int>(kind), seq) > std::tuple(o.time, static_cast<int>(o.kind), o.seq);
  }
};

}  // namespace detail

/// Runs one policy over the scenario from a given initial state.
inline TraceMetrics run_policy(const Scenario& sc, const std::vector<Machine>& fleet,
                               const std::vector<StreamJob>& stream, std::vector<MachineState> states,
                               PolicyKind kind) {
  TraceMetrics out;
  out.policy = to_string(kind);
  const Policy policy{kind, effective_utility(sc)};

  struct Pending {
    std::vector<Compilation> compiled;
    JobRecord record;
  };
  std::vector<Pending> pending(stream.size());

  std::priority_queue<detail::Event, std::vector<detail::Event>, std::greater<>> events;
  std::uint64_t seq = 0;
  for (std::size_t j = 0; j < stream.size(); ++j)
    events.push({stream[j].job.submit_time, detail::EventKind::arrival, seq++, j});

  const auto period = static_cast<double>(fleet.front().calibration_period);
  const Timestamp t0 = static_cast<double>(sc.start_cycle) * period;
  for (std::size_t i = 0; i < fleet.size(); ++i)
    events.push({next_calibration_time(fleet[i], t0 - 0.5), detail::EventKind::calibration, seq++, i});

  std::int64_t remaining_arrivals = static_cast<std::int64_t>(stream.size());
  std::int64_t open_jobs = 0;  // arrived but not finished

  auto start_next = [&](std::size_t mi, Timestamp now) {
    auto& ms = states[mi];
    if (ms.running || ms.queue.empty()) return;
    RunningJob rj;
    rj.job = std::move(ms.queue.front());
    ms.queue.pop_front();
    rj.start_time = now;
    rj.finish_time = now + rj.job.actual_exec;
    if (rj.job.filler && ms.sustain) {
      QueuedJob again = rj.job;
      again.enqueue_time = now;
      ms.queue.push_back(std::move(again));
    }
    if (!rj.job.filler) {
      auto& p = pending[rj.job.job_index];
      const auto& snap = snapshot_at(fleet[mi], now);
      double pos = 0.0;
      for (const auto& comp : p.compiled) pos += analytic_pos(comp.circuit, snap).pos;
      auto& r = p.record;
      r.pos = pos / static_cast<double>(p.compiled.size());
      r.exec_cycle = snap.cycle_index;
      r.crossover = r.exec_cycle != r.compile_cycle;
      r.start_time = now;
      r.wait = now - r.submit_time;
      r.exec = rj.job.actual_exec;
      if (stream[rj.job.job_index].job.qos_max_wait) r.qos_met = r.wait <= *stream[rj.job.job_index].job.qos_max_wait;
    }
    events.push({rj.finish_time, detail::EventKind::finish, seq++, mi});
    ms.running = std::move(rj);
  };

  for (std::size_t i = 0; i < fleet.size(); ++i) start_next(i, t0);

  while (!events.empty() && (remaining_arrivals > 0 || open_jobs > 0)) {
    const detail::Event ev = events.top();
    events.pop();
    const Timestamp now = ev.time;
    switch (ev.kind) {
      case detail::EventKind::calibration:
        ++out.calibration_events;
        events.push({now + period, detail::EventKind::calibration, seq++, ev.target});
        break;
      case detail::EventKind::finish: {
        auto& ms = states[ev.target];
        const RunningJob done = std::move(*ms.running);
        ms.running.reset();
        ++ms.completed;
        if (!done.job.filler) {
          ++out.completions;
          --open_jobs;
        }
        start_next(ev.target, now);
        break;
      }
      case detail::EventKind::arrival: {
        --remaining_arrivals;
        ++out.arrivals;
        ++open_jobs;
        const Job& job = stream[ev.target].job;
        std::vector<MachineLoad> loads;
        for (std::size_t i = 0; i < fleet.size(); ++i)
          loads.push_back({&fleet[i], predicted_queue_time(states[i], sc.models, now)});
        auto sel = select_machine(job, loads, sc.models, policy, now);

        auto& p = pending[ev.target];
        p.compiled = compile_job(job, sel, now);
        auto& r = p.record;
        r.job_id = job.id;
        r.policy = out.policy;
        r.machine_id = sel.machine_id;
        r.benchmark = stream[ev.target].benchmark;
        r.batch_size = static_cast<std::int64_t>(job.circuits.size());
        r.submit_time = job.submit_time;
        r.predicted_fidelity = sel.candidate.predicted_fidelity;
        r.predicted_wait = sel.candidate.predicted_wait;
        r.predicted_exec = sel.candidate.predicted_exec;
        r.crossover_predicted = sel.candidate.crossover_predicted;
        r.compile_cycle = sel.representative.circuit.cycle_index;
        r.qos_feasible_at_decision =
            job.qos_max_wait.has_value() &&
            std::any_of(loads.begin(), loads.end(), [&](const MachineLoad& ml) {
              return ml.machine->n_qubits >= job.representative().width && ml.predicted_wait <= *job.qos_max_wait;
            });

        const auto mi = static_cast<std::size_t>(std::find_if(fleet.begin(), fleet.end(), [&](const Machine& m) {
                                                   return m.id == sel.machine_id;
                                                 }) - fleet.begin());
        QueuedJob q;
        q.filler = false;
        q.job_index = ev.target;
        q.features = job_runtime_features(job, sel.representative.circuit, fleet[mi]);
        q.predicted_exec = sel.candidate.predicted_exec;
        Rng noise_rng(mix_seed(sc.exec_seed, ev.target));
        q.actual_exec = q.predicted_exec * (1.0 + uniform_real(noise_rng, -sc.exec_noise, sc.exec_noise));
        q.enqueue_time = now;
        states[mi].queue.push_back(std::move(q));
        start_next(mi, now);
        break;
      }
    }
  }

  for (auto& p : pending) out.records.push_back(std::move(p.record));
  std::sort(out.records.begin(), out.records.end(),
            [](const JobRecord& a, const JobRecord& b) { return a.job_id < b.job_id; });
  out.aggregates = aggregate(out.records);
  return out;
}

/// The fleet a scenario actually runs on (staggered when requested).
inline std::vector<Machine> scenario_fleet(const Scenario& sc) {
  return sc.stagger ? apply_stagger(sc.fleet) : sc.fleet;
}

/// Runs every policy on identical copies of the initial state and arrival stream.
inline std::vector<TraceMetrics> run(const Scenario& sc) {
  validate(sc);
  const auto fleet = scenario_fleet(sc);
  const auto stream = generate_job_stream(sc);
  const auto initial = seed_load(fleet, sc.load, sc.models, sc.exec_noise);
  std::vector<TraceMetrics> out;
  for (auto kind : sc.policies) out.push_back(run_policy(sc, fleet, stream, initial, kind));
  return out;
}

struct ComparisonReport {
  std::vector<TraceMetrics> traces;
  std::map<std::string, double> ratios;

  [[nodiscard]] const TraceMetrics* find(const std::string& policy) const {
    for (const auto& t : traces)
      if (t.policy == policy) return &t;
    return nullptr;
  }
};

inline double safe_ratio(double num, double den) {
  if (den == 0.0) return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

/// Cross-policy ratios for whichever of the three policies are present.
inline std::map<std::string, double> policy_ratios(const std::map<std::string, Aggregates>& agg) {
  std::map<std::string, double> r;
  auto get = [&](const char* name) -> const Aggregates* {
    auto it = agg.find(name);
    return it == agg.end() ? nullptr : &it->second;
  };
  const auto* p = get("proposed");
  const auto* f = get("only_fid");
  const auto* w = get("only_wt");
  if (p && f) {
    r["fidelity_proposed_over_only_fid"] = safe_ratio(p->mean_pos, f->mean_pos);
    r["wait_only_fid_over_proposed"] = safe_ratio(f->mean_wait, p->mean_wait);
  }
  if (p && w) {
    r["fidelity_proposed_over_only_wt"] = safe_ratio(p->mean_pos, w->mean_pos);
    r["wait_proposed_over_only_wt"] = safe_ratio(p->mean_wait, w->mean_wait);
  }
  if (f && w) {
    r["fidelity_only_wt_over_only_fid"] = safe_ratio(w->mean_pos, f->mean_pos);
    r["wait_only_fid_over_only_wt"] = safe_ratio(f->mean_wait, w->mean_wait);
  }
  return r;
}

inline ComparisonReport compare_policies(const Scenario& sc) {
  if (sc.policies.size() < 2) throw ValidationError("compare_policies: need at least two policies");
  ComparisonReport rep;
  rep.traces = run(sc);
  std::map<std::string, Aggregates> agg;
  for (const auto& t : rep.traces) agg.emplace(t.policy, t.aggregates);
  rep.ratios = policy_ratios(agg);
  return rep;
}

// ---------------------------------------------------------------------------
// Export

inline constexpr const char* kTraceSchemaVersion = "qcs-trace-1";

inline const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> cols{
      "schema_version", "job_id",      "policy",          "machine_id",       "benchmark",
      "batch_size",     "submit_time", "start_time",      "wait",             "exec",
      "pos",            "crossover",   "qos_met",         "predicted_fidelity", "predicted_wait",
      "predicted_exec", "crossover_predicted", "qos_feasible_at_decision", "compile_cycle", "exec_cycle"};
  return cols;
}

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string trace_csv(const std::vector<TraceMetrics>& traces) {
  std::ostringstream os;
  const auto& cols = trace_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& t : traces) {
    for (const auto& r : t.records) {
      os << kTraceSchemaVersion << ',' << r.job_id << ',' << r.policy << ',' << r.machine_id << ',' << r.benchmark
         << ',' << r.batch_size << ',' << format_number(r.submit_time) << ',' << format_number(r.start_time) << ','
         << format_number(r.wait) << ',' << format_number(r.exec) << ',' << format_number(r.pos) << ','
         << (r.crossover ? 1 : 0) << ',' << (r.qos_met ? (*r.qos_met ? "1" : "0") : "") << ','
         << format_number(r.predicted_fidelity) << ',' << format_number(r.predicted_wait) << ','
         << format_number(r.predicted_exec) << ',' << (r.crossover_predicted ? 1 : 0) << ','
         << (r.qos_feasible_at_decision ? 1 : 0) << ',' << r.compile_cycle << ',' << r.exec_cycle << "\n";
    }
  }
  return os.str();
}

inline nlohmann::json to_json_value(const Aggregates& a) {
  return {{"jobs", a.jobs},
          {"mean_pos", a.mean_pos},
          {"mean_wait", a.mean_wait},
          {"crossover_count", a.crossover_count},
          {"crossover_rate", a.crossover_rate()},
          {"qos_violations", a.qos_violations},
          {"qos_violations_when_feasible", a.qos_violations_when_feasible}};
}

inline nlohmann::json aggregate_json(const ComparisonReport& rep) {
  nlohmann::json policies = nlohmann::json::object();
  for (const auto& t : rep.traces) {
    auto j = to_json_value(t.aggregates);
    j["arrivals"] = t.arrivals;
    j["completions"] = t.completions;
    policies[t.policy] = j;
  }
  return {{"schema_version", kTraceSchemaVersion}, {"policies", policies}, {"ratios", rep.ratios}};
}

inline nlohmann::json series_json(const ComparisonReport& rep) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& t : rep.traces) {
    nlohmann::json s;
    std::vector<std::string> ids;
    std::vector<std::string> machines;
    std::vector<double> pos;
    std::vector<double> wait;
    std::vector<int> cross;
    for (const auto& r : t.records) {
      ids.push_back(r.job_id);
      machines.push_back(r.machine_id);
      pos.push_back(r.pos);
      wait.push_back(r.wait);
      cross.push_back(r.crossover ? 1 : 0);
    }
    out[t.policy] = {{"job_id", ids}, {"machine_id", machines}, {"pos", pos}, {"wait", wait}, {"crossover", cross}};
  }
  return out;
}

}  // namespace qcs
