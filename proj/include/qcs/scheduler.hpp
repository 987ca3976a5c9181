#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qcs/circuits.hpp"
#include "qcs/error.hpp"
#include "qcs/fleet.hpp"
#include "qcs/predictors.hpp"
#include "qcs/transpiler.hpp"

namespace qcs {

struct Job {
  std::string id;
  std::vector<Circuit> circuits;
  std::size_t representative_index = 0;
  std::int64_t shots = 1024;
  std::optional<double> qos_max_wait;
  Timestamp submit_time = 0.0;

  [[nodiscard]] const Circuit& representative() const { return circuits.at(representative_index); }
};

inline void validate(const Job& job) {
  if (job.circuits.empty()) throw ValidationError("job '" + job.id + "': circuits must be non-empty");
  if (job.representative_index >= job.circuits.size())
    throw ValidationError("job '" + job.id + "': representative_index out of range");
  if (job.shots < 1) throw ValidationError("job '" + job.id + "': shots must be >= 1");
  if (job.qos_max_wait && *job.qos_max_wait < 0.0) throw ValidationError("job '" + job.id + "': negative QOS bound");
}

struct Candidate {
  std::string machine_id;
  double predicted_fidelity = 0.0;
  double predicted_wait = 0.0;
  double predicted_exec = 0.0;
  bool crossover_predicted = false;
  bool qos_violated = false;
};

/// Linear utility. Weights are sign coefficients in {-1, 0, 1}; penalties
/// carry the magnitude of the QOS and crossover terms.
struct UtilityConfig {
  int w_fid = 1;
  int w_wait = -1;
  int w_qos = -1;
  int w_cc = -1;
  double qos_penalty = 10.0;
  double cc_penalty = 10.0;
  double wait_normalizer = 86400.0;
};

inline void validate(const UtilityConfig& cfg) {
  for (int w : {cfg.w_fid, cfg.w_wait, cfg.w_qos, cfg.w_cc})
    if (w < -1 || w > 1) throw ValidationError("utility: weights must be -1, 0 or 1");
  if (!(cfg.wait_normalizer > 0.0)) throw ValidationError("utility: wait_normalizer must be positive");
  if (!(cfg.qos_penalty >= 1.0) || !(cfg.cc_penalty >= 1.0)) throw ValidationError("utility: penalties must be >= 1");
}

enum class PolicyKind { proposed, only_fid, only_wt };

inline const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::proposed: return "proposed";
    case PolicyKind::only_fid: return "only_fid";
    case PolicyKind::only_wt: return "only_wt";
  }
  return "?";
}

inline PolicyKind policy_kind_from_string(const std::string& s) {
  if (s == "proposed") return PolicyKind::proposed;
  if (s == "only_fid") return PolicyKind::only_fid;
  if (s == "only_wt") return PolicyKind::only_wt;
  throw ConfigError("unknown policy '" + s + "' (expected proposed, only_fid or only_wt)");
}

struct Policy {
  PolicyKind kind = PolicyKind::proposed;
  UtilityConfig config;  // used by proposed only
};

/// Fitted predictors the scheduler consults.
struct Models {
  ProductLinearModel fidelity;
  ProductLinearModel runtime;
  double runtime_floor = kDefaultRuntimeFloor;
};

/// One fleet member as seen by the scheduler at decision time.
struct MachineLoad {
  const Machine* machine = nullptr;
  double predicted_wait = 0.0;
};

inline JobRuntimeFeatures job_runtime_features(const Job& job, const CompiledCircuit& representative,
                                               const Machine& m) {
  JobRuntimeFeatures jf;
  jf.batch_size = static_cast<double>(job.circuits.size());
  jf.shots = static_cast<double>(job.shots);
  jf.depth = representative.depth;
  jf.width = job.representative().width;
  jf.total_gates = static_cast<double>(representative.physical_gates.size());
  jf.machine_size = m.n_qubits;
  jf.memory_slots = memory_slots_for(jf.batch_size);
  return jf;
}

/// Capacity filter, then QOS: machines predicted to wait past the bound are
/// dropped only when at least one machine meets it.
inline std::vector<MachineLoad> feasible_machines(const Job& job, const std::vector<MachineLoad>& fleet,
                                                  Timestamp /*now*/) {
  if (fleet.empty()) throw NoFeasibleMachineError("job '" + job.id + "': fleet is empty");
  std::vector<MachineLoad> fit;
  const int width = job.representative().width;
  for (const auto& ml : fleet)
    if (ml.machine->n_qubits >= width) fit.push_back(ml);
  if (fit.empty())
    throw NoFeasibleMachineError("job '" + job.id + "': no machine has " + std::to_string(width) + " qubits");
  if (!job.qos_max_wait) return fit;
  std::vector<MachineLoad> within;
  for (const auto& ml : fit)
    if (ml.predicted_wait <= *job.qos_max_wait) within.push_back(ml);
  return within.empty() ? fit : within;
}

/// True iff the job is predicted to finish strictly after the machine's next
/// calibration boundary.
inline bool predicts_crossover(const Machine& m, Timestamp now, double predicted_wait, double predicted_exec) {
  return now + predicted_wait + predicted_exec > next_calibration_time(m, now);
}

inline double utility(const Candidate& c, const UtilityConfig& cfg) {
  double u = cfg.w_fid * c.predicted_fidelity + cfg.w_wait * (c.predicted_wait / cfg.wait_normalizer);
  if (c.qos_violated) u += cfg.w_qos * cfg.qos_penalty;
  if (c.crossover_predicted) u += cfg.w_cc * cfg.cc_penalty;
  return u;
}

struct EvaluatedCandidate {
  Candidate candidate;
  const Machine* machine = nullptr;
  Compilation representative;
};

/// Compiles the representative circuit on every feasible machine and fills in
/// the predicted fidelity, wait, execution time and flags.
inline std::vector<EvaluatedCandidate> evaluate_candidates(const Job& job, const std::vector<MachineLoad>& fleet,
                                                           const Models& models, Timestamp now) {
  validate(job);
  std::vector<EvaluatedCandidate> out;
  for (const auto& ml : feasible_machines(job, fleet, now)) {
    EvaluatedCandidate ec;
    ec.machine = ml.machine;
    ec.representative = compile_for(job.representative(), *ml.machine, now);
    auto& c = ec.candidate;
    c.machine_id = ml.machine->id;
    c.predicted_fidelity = std::clamp(predict(models.fidelity, ec.representative.features.values()), 0.0, 1.0);
    c.predicted_wait = std::max(ml.predicted_wait, 0.0);
    c.predicted_exec = predict_exec_time(
        models.runtime, job_runtime_features(job, ec.representative.circuit, *ml.machine), models.runtime_floor);
    c.crossover_predicted = predicts_crossover(*ml.machine, now, c.predicted_wait, c.predicted_exec);
    c.qos_violated = job.qos_max_wait.has_value() && c.predicted_wait > *job.qos_max_wait;
    out.push_back(std::move(ec));
  }
  return out;
}

/// Policy score; higher is better.
inline double policy_score(const Candidate& c, const Policy& policy) {
  switch (policy.kind) {
    case PolicyKind::only_wt: return -c.predicted_wait;
    case PolicyKind::only_fid: return c.predicted_fidelity;
    case PolicyKind::proposed: return utility(c, policy.config);
  }
  return 0.0;
}

/// Strict ordering: score, then higher fidelity, lower wait, smaller id.
inline bool better_candidate(const Candidate& x, const Candidate& y, const Policy& policy) {
  const double sx = policy_score(x, policy);
  const double sy = policy_score(y, policy);
  return std::tuple(-sx, -x.predicted_fidelity, x.predicted_wait, x.machine_id) <
         std::tuple(-sy, -y.predicted_fidelity, y.predicted_wait, y.machine_id);
}

struct Selection {
  std::string machine_id;
  Candidate candidate;
  const Machine* machine = nullptr;
  Compilation representative;
  std::vector<Candidate> considered;
};

inline Selection select_from(std::vector<EvaluatedCandidate> evaluated, const Policy& policy) {
  if (evaluated.empty()) throw NoFeasibleMachineError("select_machine: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 1; i < evaluated.size(); ++i)
    if (better_candidate(evaluated[i].candidate, evaluated[best].candidate, policy)) best = i;
  Selection sel;
  for (const auto& ec : evaluated) sel.considered.push_back(ec.candidate);
  sel.machine_id = evaluated[best].candidate.machine_id;
  sel.candidate = evaluated[best].candidate;
  sel.machine = evaluated[best].machine;
  sel.representative = std::move(evaluated[best].representative);
  return sel;
}

/// A QOS bound tighter than the wait normalizer becomes the job's normalizer,
/// so waits weigh more heavily against fidelity for impatient jobs.
inline Policy policy_for_job(const Policy& policy, const Job& job) {
  Policy p = policy;
  if (job.qos_max_wait && *job.qos_max_wait > 0.0 && *job.qos_max_wait < p.config.wait_normalizer)
    p.config.wait_normalizer = *job.qos_max_wait;
  return p;
}

inline Selection select_machine(const Job& job, const std::vector<MachineLoad>& fleet, const Models& models,
                                const Policy& policy, Timestamp now) {
  return select_from(evaluate_candidates(job, fleet, models, now), policy_for_job(policy, job));
}

/// Compiles every circuit of the job for the chosen machine; the
/// representative reuses the compilation made during selection.
inline std::vector<Compilation> compile_job(const Job& job, const Selection& sel, Timestamp now) {
  std::vector<Compilation> out;
  out.reserve(job.circuits.size());
  for (std::size_t i = 0; i < job.circuits.size(); ++i) {
    if (i == job.representative_index)
      out.push_back(sel.representative);
    else
      out.push_back(compile_for(job.circuits[i], *sel.machine, now));
  }
  return out;
}

}  // namespace qcs
