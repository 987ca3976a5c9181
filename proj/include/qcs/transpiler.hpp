#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcs/circuits.hpp"
#include "qcs/error.hpp"
#include "qcs/fleet.hpp"

namespace qcs {

struct Mapping {
  std::vector<int> logical_to_physical;

  friend bool operator==(const Mapping&, const Mapping&) = default;
};

struct CompiledCircuit {
  std::string name;
  std::string machine_id;
  std::int64_t cycle_index = 0;
  int n_physical = 0;
  Mapping initial_mapping;
  std::vector<Gate> physical_gates;  // SWAPs appear as three cx gates labelled "swap"
  int depth = 0;
  std::set<int> measured_physical;
  int swaps_inserted = 0;

  friend bool operator==(const CompiledCircuit&, const CompiledCircuit&) = default;
};

/// Post-compilation features consumed by the fidelity model, in model order.
struct FeatureVector {
  double depth = 0.0;
  double avg_cx_error = 0.0;
  double avg_cx_critical_path_error = 0.0;
  double avg_readout_error = 0.0;

  [[nodiscard]] std::vector<double> values() const {
    return {depth, avg_cx_error, avg_cx_critical_path_error, avg_readout_error};
  }
  static const std::vector<std::string>& names() {
    static const std::vector<std::string> n{"depth", "avg_cx_error", "avg_cx_critical_path_error",
                                            "avg_readout_error"};
    return n;
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline void validate(const Mapping& map, int n_physical) {
  std::set<int> seen;
  for (int p : map.logical_to_physical) {
    if (p < 0 || p >= n_physical) throw ValidationError("mapping target " + std::to_string(p) + " out of range");
    if (!seen.insert(p).second) throw ValidationError("mapping is not injective at physical qubit " + std::to_string(p));
  }
}

namespace detail {

inline std::map<std::pair<int, int>, int> interaction_counts(const Circuit& c) {
  std::map<std::pair<int, int>, int> counts;
  for (const auto& g : c.gates) {
    if (!g.two_qubit()) continue;
    const int a = std::min(g.qubits[0], g.qubits[1]);
    const int b = std::max(g.qubits[0], g.qubits[1]);
    ++counts[{a, b}];
  }
  return counts;
}

/// Lexicographically smallest shortest path from src to dst (inclusive).
inline std::vector<int> shortest_path(const std::vector<std::vector<int>>& adj, int src, int dst) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<int> frontier;
  dist[dst] = 0;
  frontier.push(dst);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  std::vector<int> path{src};
  int cur = src;
  while (cur != dst) {
    // adj rows are sorted, so the first neighbor one step closer is the smallest
    for (int v : adj[cur]) {
      if (dist[v] == dist[cur] - 1) {
        cur = v;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

}  // namespace detail

/// Greedy noise-aware placement. Logical pairs, heaviest CX interaction first,
/// take the lowest-error free coupling edge, preferring edges that touch the
/// already placed region; leftover logical qubits take the free physical
/// qubits with the lowest readout error.
inline Mapping layout(const Circuit& c, const Machine& m, const CalibrationSnapshot& s) {
  if (c.width > m.n_qubits)
    throw CapacityError("circuit '" + c.name + "' needs " + std::to_string(c.width) + " qubits, machine '" + m.id +
                        "' has " + std::to_string(m.n_qubits));
  const auto adj = m.adjacency();
  std::vector<int> l2p(static_cast<std::size_t>(c.width), -1);
  std::vector<bool> used(static_cast<std::size_t>(m.n_qubits), false);

  std::vector<std::pair<std::pair<int, int>, int>> pairs;
  for (const auto& [pair, count] : detail::interaction_counts(c)) pairs.emplace_back(pair, count);
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.second > y.second; });

  std::vector<std::pair<double, Edge>> edges;
  for (const auto& [e, p] : s.cx_error) edges.emplace_back(p, e);
  std::sort(edges.begin(), edges.end());

  auto touches_region = [&](int q) {
    return std::any_of(adj[q].begin(), adj[q].end(), [&](int v) { return used[v]; });
  };
  auto place = [&](int logical, int physical) {
    l2p[logical] = physical;
    used[physical] = true;
  };
  bool region_empty = true;

  for (const auto& [pair, count] : pairs) {
    const auto [u, v] = pair;
    const bool u_placed = l2p[u] >= 0;
    const bool v_placed = l2p[v] >= 0;
    if (u_placed && v_placed) continue;
    if (u_placed || v_placed) {
      const int anchor = u_placed ? l2p[u] : l2p[v];
      const int loose = u_placed ? v : u;
      int best = -1;
      double best_err = std::numeric_limits<double>::infinity();
      for (int q : adj[anchor]) {
        if (used[q]) continue;
        const double err = s.cx_error.at(Edge(anchor, q));
        if (err < best_err) {
          best_err = err;
          best = q;
        }
      }
      if (best >= 0) place(loose, best);
      continue;
    }
    const Edge* chosen = nullptr;
    for (const auto& [err, e] : edges) {
      if (used[e.lo] || used[e.hi]) continue;
      if (!region_empty && !touches_region(e.lo) && !touches_region(e.hi)) continue;
      chosen = &e;
      break;
    }
    if (chosen == nullptr) {
      for (const auto& [err, e] : edges) {
        if (!used[e.lo] && !used[e.hi]) {
          chosen = &e;
          break;
        }
      }
    }
    if (chosen == nullptr) continue;
    place(u, chosen->lo);
    place(v, chosen->hi);
    region_empty = false;
  }

  std::vector<int> by_readout(static_cast<std::size_t>(m.n_qubits));
  for (int q = 0; q < m.n_qubits; ++q) by_readout[q] = q;
  std::stable_sort(by_readout.begin(), by_readout.end(),
                   [&](int a, int b) { return s.readout_error[a] < s.readout_error[b]; });
  for (int logical = 0; logical < c.width; ++logical) {
    if (l2p[logical] >= 0) continue;
    for (int q : by_readout) {
      if (!used[q]) {
        place(logical, q);
        break;
      }
    }
  }
  return Mapping{l2p};
}

/// Inserts SWAPs so every two-qubit gate acts on a coupling edge. The first
/// operand walks toward the second along the lexicographically smallest
/// shortest path; each SWAP is emitted as three CX on the traversed edge.
inline CompiledCircuit route(const Circuit& c, const Mapping& map, const Machine& m) {
  validate(map, m.n_qubits);
  if (static_cast<int>(map.logical_to_physical.size()) != c.width)
    throw ValidationError("mapping length does not match circuit width");
  const auto adj = m.adjacency();
  std::vector<int> l2p = map.logical_to_physical;
  std::vector<int> p2l(static_cast<std::size_t>(m.n_qubits), -1);
  for (int l = 0; l < c.width; ++l) p2l[l2p[l]] = l;

  CompiledCircuit cc;
  cc.name = c.name;
  cc.machine_id = m.id;
  cc.n_physical = m.n_qubits;
  cc.initial_mapping = map;
  auto& out = cc.physical_gates;
  out.reserve(c.gates.size() * 2);

  auto emit_swap = [&](int a, int b) {
    out.push_back({GateKind::cx, {a, b}, "swap"});
    out.push_back({GateKind::cx, {b, a}, "swap"});
    out.push_back({GateKind::cx, {a, b}, "swap"});
    std::swap(p2l[a], p2l[b]);
    if (p2l[a] >= 0) l2p[p2l[a]] = a;
    if (p2l[b] >= 0) l2p[p2l[b]] = b;
    ++cc.swaps_inserted;
  };

  for (const auto& g : c.gates) {
    if (!g.two_qubit()) {
      const int p = l2p[g.qubits[0]];
      out.push_back({g.kind, {p, -1}, g.label});
      if (g.kind == GateKind::measure) cc.measured_physical.insert(p);
      continue;
    }
    const int pa = l2p[g.qubits[0]];
    const int pb = l2p[g.qubits[1]];
    if (!m.has_edge(pa, pb)) {
      const auto path = detail::shortest_path(adj, pa, pb);
      for (std::size_t i = 0; i + 2 < path.size(); ++i) emit_swap(path[i], path[i + 1]);
    }
    const int qa = l2p[g.qubits[0]];
    const int qb = l2p[g.qubits[1]];
    if (g.kind == GateKind::swap) {
      emit_swap(qa, qb);
    } else {
      out.push_back({GateKind::cx, {qa, qb}, g.label});
    }
  }
  cc.depth = asap_depth(out, m.n_qubits);
  return cc;
}

/// Gate indices of the critical path: a maximum-length chain in the gate
/// dependency DAG, choosing the lexicographically smallest index sequence.
inline std::vector<std::size_t> critical_path(const std::vector<Gate>& gates, int n_qubits) {
  const std::size_t n = gates.size();
  if (n == 0) return {};
  // successor on each operand wire
  std::vector<std::array<std::size_t, 2>> next(n, {n, n});
  std::vector<std::size_t> last(static_cast<std::size_t>(n_qubits), n);
  for (std::size_t i = n; i-- > 0;) {
    for (int k = 0; k < gates[i].arity(); ++k) {
      const int q = gates[i].qubits[k];
      next[i][k] = last[q];
      last[q] = i;
    }
  }
  // height[i]: gates on the longest chain starting at i
  std::vector<int> height(n, 1);
  for (std::size_t i = n; i-- > 0;) {
    for (int k = 0; k < gates[i].arity(); ++k)
      if (next[i][k] < n) height[i] = std::max(height[i], 1 + height[next[i][k]]);
  }
  const auto layers = asap_layers(gates, n_qubits);
  const int depth = *std::max_element(layers.begin(), layers.end());
  std::size_t cur = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (layers[i] == 1 && height[i] == depth) {
      cur = i;
      break;
    }
  }
  std::vector<std::size_t> path{cur};
  while (height[cur] > 1) {
    std::size_t best = n;
    for (int k = 0; k < gates[cur].arity(); ++k) {
      const std::size_t s = next[cur][k];
      if (s < n && height[s] == height[cur] - 1) best = std::min(best, s);
    }
    cur = best;
    path.push_back(cur);
  }
  return path;
}

inline FeatureVector extract_features(const CompiledCircuit& cc, const CalibrationSnapshot& s) {
  FeatureVector f;
  f.depth = cc.depth;
  auto cx_err = [&](const Gate& g) { return s.cx_error.at(Edge(g.qubits[0], g.qubits[1])); };

  double sum = 0.0;
  int count = 0;
  for (const auto& g : cc.physical_gates) {
    if (g.kind != GateKind::cx) continue;
    sum += cx_err(g);
    ++count;
  }
  f.avg_cx_error = count > 0 ? sum / count : 0.0;

  sum = 0.0;
  count = 0;
  for (std::size_t i : critical_path(cc.physical_gates, cc.n_physical)) {
    const auto& g = cc.physical_gates[i];
    if (g.kind != GateKind::cx) continue;
    sum += cx_err(g);
    ++count;
  }
  f.avg_cx_critical_path_error = count > 0 ? sum / count : 0.0;

  sum = 0.0;
  for (int q : cc.measured_physical) sum += s.readout_error[q];
  f.avg_readout_error = cc.measured_physical.empty() ? 0.0 : sum / static_cast<double>(cc.measured_physical.size());
  return f;
}

struct Compilation {
  CompiledCircuit circuit;
  FeatureVector features;
};

/// layout -> route -> extract_features against the snapshot active at t.
inline Compilation compile_for(const Circuit& c, const Machine& m, Timestamp t) {
  if (c.width > m.n_qubits)
    throw CapacityError("circuit '" + c.name + "' needs " + std::to_string(c.width) + " qubits, machine '" + m.id +
                        "' has " + std::to_string(m.n_qubits));
  const auto& snap = snapshot_at(m, t);
  Compilation out;
  out.circuit = route(c, layout(c, m, snap), m);
  out.circuit.cycle_index = snap.cycle_index;
  out.features = extract_features(out.circuit, snap);
  return out;
}

inline nlohmann::json to_json_value(const CompiledCircuit& cc) {
  return {{"name", cc.name},
          {"width", cc.n_physical},
          {"gates", gates_to_json(cc.physical_gates)},
          {"measured", cc.measured_physical},
          {"machine_id", cc.machine_id},
          {"cycle_index", cc.cycle_index},
          {"mapping", cc.initial_mapping.logical_to_physical},
          {"depth", cc.depth},
          {"swaps_inserted", cc.swaps_inserted}};
}

}  // namespace qcs
