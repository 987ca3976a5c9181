#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcs/error.hpp"
#include "qcs/fleet.hpp"
#include "qcs/random.hpp"
#include "qcs/transpiler.hpp"

namespace qcs {

/// Probability of success: fraction of error-free trials.
struct PosEstimate {
  double pos = 1.0;
  std::optional<std::int64_t> shots;  // empty for the analytic value
  std::uint64_t seed = 0;
};

namespace detail {

/// Error probability of every error event in one execution of cc.
inline std::vector<double> error_events(const CompiledCircuit& cc, const CalibrationSnapshot& s) {
  std::vector<double> events;
  events.reserve(cc.physical_gates.size() + cc.measured_physical.size());
  for (const auto& g : cc.physical_gates) {
    switch (g.kind) {
      case GateKind::cx:
        events.push_back(s.cx_error.at(Edge(g.qubits[0], g.qubits[1])));
        break;
      case GateKind::swap: {
        const double e = s.cx_error.at(Edge(g.qubits[0], g.qubits[1]));
        events.insert(events.end(), {e, e, e});
        break;
      }
      case GateKind::single_qubit:
        events.push_back(s.single_qubit_error[g.qubits[0]]);
        break;
      case GateKind::measure:
        break;
    }
  }
  for (int q : cc.measured_physical) events.push_back(s.readout_error[q]);
  return events;
}

}  // namespace detail

/// Independent all-or-nothing errors: product of (1 - p) over every gate
/// instance and measured qubit.
inline PosEstimate analytic_pos(const CompiledCircuit& cc, const CalibrationSnapshot& s) {
  double pos = 1.0;
  for (double p : detail::error_events(cc, s)) pos *= 1.0 - p;
  return {pos, std::nullopt, 0};
}

/// Monte Carlo estimate. Shot i draws from its own stream seeded by
/// mix_seed(seed, i), so shots can be split across workers freely.
inline PosEstimate sample_pos(const CompiledCircuit& cc, const CalibrationSnapshot& s, std::int64_t shots,
                              std::uint64_t seed) {
  if (shots < 1) throw ValidationError("sample_pos: shots must be >= 1");
  const auto events = detail::error_events(cc, s);
  std::int64_t clean = 0;
  for (std::int64_t shot = 0; shot < shots; ++shot) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(shot)));
    bool ok = true;
    for (double p : events) {
      // draw for every event so the stream layout does not depend on outcomes
      if (uniform01(rng) < p) ok = false;
    }
    if (ok) ++clean;
  }
  return {static_cast<double>(clean) / static_cast<double>(shots), shots, seed};
}

}  // namespace qcs
