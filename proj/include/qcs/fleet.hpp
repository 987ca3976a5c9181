#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcs/error.hpp"
#include "qcs/random.hpp"

namespace qcs {

/// Simulation time in seconds from epoch 0. Calibration boundaries are always
/// whole seconds; event times in the simulator may be fractional.
using Timestamp = double;
/// Whole-second duration used for calibration periods and offsets.
using Seconds = std::int64_t;

inline constexpr Seconds kDefaultCalibrationPeriod = 86400;

/// Undirected coupling edge, stored with lo < hi.
struct Edge {
  int lo = 0;
  int hi = 0;

  Edge() = default;
  Edge(int a, int b) : lo(std::min(a, b)), hi(std::max(a, b)) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;

  [[nodiscard]] std::string key() const {
    return std::to_string(lo) + "-" + std::to_string(hi);
  }
};

struct CalibrationSnapshot {
  std::int64_t cycle_index = 0;
  Seconds valid_from = 0;
  std::map<Edge, double> cx_error;
  std::vector<double> readout_error;
  std::vector<double> single_qubit_error;

  friend bool operator==(const CalibrationSnapshot&, const CalibrationSnapshot&) = default;
};

struct Machine {
  std::string id;
  int n_qubits = 1;
  std::vector<Edge> coupling;  // sorted, unique
  Seconds calibration_period = kDefaultCalibrationPeriod;
  Seconds calibration_offset = 0;
  std::vector<CalibrationSnapshot> snapshots;
  bool is_public = false;

  friend bool operator==(const Machine&, const Machine&) = default;

  [[nodiscard]] bool has_edge(int a, int b) const {
    return std::binary_search(coupling.begin(), coupling.end(), Edge(a, b));
  }

  /// Sorted neighbor lists, one per physical qubit.
  [[nodiscard]] std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_qubits));
    for (const auto& e : coupling) {
      adj[e.lo].push_back(e.hi);
      adj[e.hi].push_back(e.lo);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
  }

  /// End of the last modeled calibration window (exclusive).
  [[nodiscard]] Seconds horizon_end() const {
    if (snapshots.empty()) return calibration_offset;
    return snapshots.back().valid_from + calibration_period;
  }
};

struct ErrorRange {
  double min = 0.0;
  double max = 0.0;
};

struct FleetSpec {
  int machine_count = 26;
  std::vector<int> qubit_count_choices{5, 7, 16, 27, 65};
  ErrorRange readout{0.01, 0.12};
  ErrorRange cx{0.005, 0.06};
  ErrorRange single_qubit{0.0002, 0.002};
  int cycles = 74;
  Seconds calibration_period = kDefaultCalibrationPeriod;
  bool stagger = false;
  std::uint64_t rng_seed = 2021;
  /// Width of each machine's own error window as a fraction of every range.
  /// A machine's window is placed once; per-cycle errors are drawn uniformly
  /// inside it. 1.0 makes every machine draw from the full ranges.
  double machine_spread = 0.35;
  /// Share of machines in the poor tier. Good machines place their window in
  /// the lowest quarter of each range, poor ones in the highest quarter.
  double poor_fraction = 0.4;
};

namespace detail {

inline void require(bool ok, const std::string& machine, const std::string& what) {
  if (!ok) throw ValidationError("machine '" + machine + "': " + what);
}

inline bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p < 1.0; }

inline bool coupling_connected(int n, const std::vector<Edge>& coupling) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n;
  for (const auto& e : coupling) {
    const int a = find(e.lo);
    const int b = find(e.hi);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace detail

/// Throws ValidationError naming the machine and the offending field.
inline void validate(const Machine& m) {
  using detail::require;
  require(!m.id.empty(), m.id, "id must be non-empty");
  require(m.n_qubits >= 1, m.id, "n_qubits must be positive");
  require(m.calibration_period > 0, m.id, "calibration_period must be positive");
  require(m.calibration_offset >= 0 && m.calibration_offset < m.calibration_period, m.id,
          "calibration_offset must lie in [0, calibration_period)");
  for (std::size_t i = 0; i < m.coupling.size(); ++i) {
    const auto& e = m.coupling[i];
    require(e.lo != e.hi, m.id, "coupling edge " + e.key() + " is a self-loop");
    require(e.lo >= 0 && e.hi < m.n_qubits, m.id,
            "coupling edge " + e.key() + " references a qubit >= n_qubits");
    require(i == 0 || m.coupling[i - 1] < e, m.id, "coupling edges must be sorted and unique");
  }
  require(detail::coupling_connected(m.n_qubits, m.coupling), m.id, "coupling graph is not connected");
  require(!m.snapshots.empty(), m.id, "snapshots must be non-empty");

  const auto n = static_cast<std::size_t>(m.n_qubits);
  for (std::size_t k = 0; k < m.snapshots.size(); ++k) {
    const auto& s = m.snapshots[k];
    const std::string where = "snapshot cycle " + std::to_string(s.cycle_index);
    require(s.cycle_index >= 0, m.id, where + ": cycle must be non-negative");
    require(k == 0 || s.cycle_index == m.snapshots[k - 1].cycle_index + 1, m.id,
            where + ": cycles must be consecutive");
    require(s.valid_from == s.cycle_index * m.calibration_period + m.calibration_offset, m.id,
            where + ": valid_from must equal cycle * period + offset");
    require(s.cx_error.size() == m.coupling.size(), m.id, where + ": cx_error must cover every coupling edge");
    for (const auto& [edge, p] : s.cx_error) {
      require(m.has_edge(edge.lo, edge.hi), m.id, where + ": cx_error edge " + edge.key() + " is not a coupling edge");
      require(detail::is_probability(p), m.id, where + ": cx_error on edge " + edge.key() + " outside [0, 1)");
    }
    require(s.readout_error.size() == n, m.id, where + ": readout_error must cover all qubits");
    require(s.single_qubit_error.size() == n, m.id, where + ": single_qubit_error must cover all qubits");
    for (std::size_t q = 0; q < n; ++q) {
      require(detail::is_probability(s.readout_error[q]), m.id,
              where + ": readout_error on qubit " + std::to_string(q) + " outside [0, 1)");
      require(detail::is_probability(s.single_qubit_error[q]), m.id,
              where + ": single_qubit_error on qubit " + std::to_string(q) + " outside [0, 1)");
    }
  }
}

inline void validate(const FleetSpec& spec) {
  auto fail = [](const std::string& what) { throw ValidationError("fleet spec: " + what); };
  if (spec.machine_count < 1) fail("machine_count must be positive");
  if (spec.qubit_count_choices.empty()) fail("qubit_count_choices must be non-empty");
  for (int q : spec.qubit_count_choices)
    if (q < 1) fail("qubit_count_choices must be positive");
  for (const auto& [name, r] : {std::pair{"readout", spec.readout}, std::pair{"cx", spec.cx},
                                std::pair{"single_qubit", spec.single_qubit}}) {
    if (!(r.min <= r.max)) fail(std::string(name) + " range has min > max");
    if (!detail::is_probability(r.min) || !detail::is_probability(r.max))
      fail(std::string(name) + " range outside [0, 1)");
  }
  if (spec.cycles < 1) fail("cycles must be positive");
  if (!(spec.machine_spread > 0.0 && spec.machine_spread <= 1.0)) fail("machine_spread must be in (0, 1]");
  if (!(spec.poor_fraction >= 0.0 && spec.poor_fraction <= 1.0)) fail("poor_fraction must be in [0, 1]");
  if (spec.calibration_period < 1) fail("calibration_period must be positive");
}

/// Linear chain up to 5 qubits; larger machines use a row-major 2D lattice
/// with ceil(sqrt(n)) columns.
inline std::vector<Edge> default_topology(int n_qubits) {
  std::vector<Edge> edges;
  if (n_qubits <= 5) {
    for (int q = 0; q + 1 < n_qubits; ++q) edges.emplace_back(q, q + 1);
    return edges;
  }
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_qubits))));
  for (int q = 0; q < n_qubits; ++q) {
    if ((q % cols) + 1 < cols && q + 1 < n_qubits) edges.emplace_back(q, q + 1);
    if (q + cols < n_qubits) edges.emplace_back(q, q + cols);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

/// Returns the snapshot with the largest valid_from <= t.
inline const CalibrationSnapshot& snapshot_at(const Machine& m, Timestamp t) {
  if (m.snapshots.empty() || t < static_cast<Timestamp>(m.snapshots.front().valid_from) ||
      t >= static_cast<Timestamp>(m.horizon_end())) {
    std::ostringstream os;
    os << "machine '" << m.id << "': time " << t << " outside calibrated horizon";
    throw OutOfRangeError(os.str());
  }
  auto it = std::upper_bound(m.snapshots.begin(), m.snapshots.end(), t,
                             [](Timestamp v, const CalibrationSnapshot& s) {
                               return v < static_cast<Timestamp>(s.valid_from);
                             });
  return *std::prev(it);
}

/// Smallest k * period + offset strictly greater than t.
inline Timestamp next_calibration_time(const Machine& m, Timestamp t) {
  const auto period = static_cast<double>(m.calibration_period);
  const auto offset = static_cast<double>(m.calibration_offset);
  double k = std::floor((t - offset) / period) + 1.0;
  double boundary = k * period + offset;
  // floor() on a quotient can land one period off near exact multiples.
  while (boundary <= t) boundary += period;
  while (boundary - period > t) boundary -= period;
  return boundary;
}

/// Spreads calibration boundaries evenly: machine i gets offset i * period / M.
inline std::vector<Machine> apply_stagger(std::vector<Machine> fleet) {
  if (fleet.empty()) return fleet;
  const Seconds period = fleet.front().calibration_period;
  for (const auto& m : fleet)
    if (m.calibration_period != period)
      throw MixedPeriodError("apply_stagger: machine '" + m.id + "' has a different calibration period");
  const auto count = static_cast<Seconds>(fleet.size());
  for (Seconds i = 0; i < count; ++i) {
    auto& m = fleet[static_cast<std::size_t>(i)];
    m.calibration_offset = i * period / count;
    for (auto& s : m.snapshots) s.valid_from = s.cycle_index * period + m.calibration_offset;
  }
  return fleet;
}

inline std::vector<Machine> generate_synthetic_fleet(const FleetSpec& spec) {
  validate(spec);
  Rng rng(spec.rng_seed);
  std::vector<Machine> fleet;
  fleet.reserve(static_cast<std::size_t>(spec.machine_count));
  const auto n_choices = static_cast<std::int64_t>(spec.qubit_count_choices.size());
  for (int i = 0; i < spec.machine_count; ++i) {
    Machine m;
    m.n_qubits = spec.qubit_count_choices[static_cast<std::size_t>(uniform_int(rng, 0, n_choices - 1))];
    std::ostringstream id;
    id << "fake_" << (i < 10 ? "0" : "") << i << "_q" << m.n_qubits;
    m.id = id.str();
    m.coupling = default_topology(m.n_qubits);
    m.calibration_period = spec.calibration_period;
    m.calibration_offset = 0;
    m.is_public = uniform01(rng) < 0.5;
    // one quality level per machine positions its window in every range
    const bool poor = uniform01(rng) < spec.poor_fraction;
    const double quality = (poor ? 0.75 : 0.0) + 0.25 * uniform01(rng);
    auto window = [&](const ErrorRange& r) {
      const double width = spec.machine_spread * (r.max - r.min);
      const double lo = r.min + quality * (r.max - r.min - width);
      return ErrorRange{lo, lo + width};
    };
    const ErrorRange cx = window(spec.cx);
    const ErrorRange ro = window(spec.readout);
    const ErrorRange sq = window(spec.single_qubit);
    for (int c = 0; c < spec.cycles; ++c) {
      CalibrationSnapshot s;
      s.cycle_index = c;
      s.valid_from = c * spec.calibration_period;
      for (const auto& e : m.coupling) s.cx_error[e] = uniform_real(rng, cx.min, cx.max);
      s.readout_error.resize(static_cast<std::size_t>(m.n_qubits));
      s.single_qubit_error.resize(static_cast<std::size_t>(m.n_qubits));
      for (auto& p : s.readout_error) p = uniform_real(rng, ro.min, ro.max);
      for (auto& p : s.single_qubit_error) p = uniform_real(rng, sq.min, sq.max);
      m.snapshots.push_back(std::move(s));
    }
    fleet.push_back(std::move(m));
  }
  if (spec.stagger) fleet = apply_stagger(std::move(fleet));
  return fleet;
}

// ---------------------------------------------------------------------------
// JSON fleet file

inline nlohmann::json to_json_value(const Machine& m) {
  nlohmann::json coupling = nlohmann::json::array();
  for (const auto& e : m.coupling) coupling.push_back({e.lo, e.hi});
  nlohmann::json snaps = nlohmann::json::array();
  for (const auto& s : m.snapshots) {
    nlohmann::json cx = nlohmann::json::object();
    for (const auto& [e, p] : s.cx_error) cx[e.key()] = p;
    snaps.push_back({{"cycle", s.cycle_index},
                     {"valid_from_s", s.valid_from},
                     {"cx_error", cx},
                     {"readout_error", s.readout_error},
                     {"single_qubit_error", s.single_qubit_error}});
  }
  return {{"id", m.id},
          {"n_qubits", m.n_qubits},
          {"is_public", m.is_public},
          {"coupling", coupling},
          {"calibration_period_s", m.calibration_period},
          {"calibration_offset_s", m.calibration_offset},
          {"snapshots", snaps}};
}

namespace detail {

inline Edge parse_edge_key(const std::string& key, const std::string& machine) {
  const auto dash = key.find('-');
  try {
    if (dash == std::string::npos) throw std::invalid_argument(key);
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a_str = key.substr(0, dash);
    const std::string b_str = key.substr(dash + 1);
    const int a = std::stoi(a_str, &used_a);
    const int b = std::stoi(b_str, &used_b);
    if (used_a != a_str.size() || used_b != b_str.size()) throw std::invalid_argument(key);
    return {a, b};
  } catch (const std::logic_error&) {
    throw ParseError("machine '" + machine + "': bad cx_error edge key '" + key + "'");
  }
}

}  // namespace detail

/// Parses one machine object and validates it.
inline Machine machine_from_json(const nlohmann::json& j) {
  Machine m;
  try {
    m.id = j.at("id").get<std::string>();
    m.n_qubits = j.at("n_qubits").get<int>();
    m.is_public = j.value("is_public", false);
    for (const auto& pair : j.at("coupling")) {
      if (!pair.is_array() || pair.size() != 2) throw ParseError("machine '" + m.id + "': coupling entries must be [q, q]");
      m.coupling.emplace_back(pair[0].get<int>(), pair[1].get<int>());
    }
    std::sort(m.coupling.begin(), m.coupling.end());
    m.calibration_period = j.at("calibration_period_s").get<Seconds>();
    m.calibration_offset = j.at("calibration_offset_s").get<Seconds>();
    for (const auto& js : j.at("snapshots")) {
      CalibrationSnapshot s;
      s.cycle_index = js.at("cycle").get<std::int64_t>();
      s.valid_from = js.at("valid_from_s").get<Seconds>();
      for (const auto& [key, p] : js.at("cx_error").items()) {
        const Edge e = detail::parse_edge_key(key, m.id);
        const double value = p.get<double>();
        if (!detail::is_probability(value))
          throw ValidationError("machine '" + m.id + "': cx_error on edge " + e.key() + " outside [0, 1)");
        s.cx_error[e] = value;
      }
      s.readout_error = js.at("readout_error").get<std::vector<double>>();
      s.single_qubit_error = js.at("single_qubit_error").get<std::vector<double>>();
      m.snapshots.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("machine '" + m.id + "': " + e.what());
  }
  validate(m);
  return m;
}

inline std::string fleet_to_string(const std::vector<Machine>& fleet) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : fleet) arr.push_back(to_json_value(m));
  return arr.dump(1) + "\n";
}

inline std::vector<Machine> fleet_from_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("fleet file: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("fleet file: top level must be an array of machines");
  std::vector<Machine> fleet;
  for (const auto& j : doc) fleet.push_back(machine_from_json(j));
  return fleet;
}

inline std::vector<Machine> load_fleet(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifactError("cannot read fleet file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return fleet_from_string(buffer.str());
}

inline void save_fleet(const std::vector<Machine>& fleet, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write fleet file '" + path + "'");
  out << fleet_to_string(fleet);
}

inline const Machine& find_machine(const std::vector<Machine>& fleet, const std::string& id) {
  for (const auto& m : fleet)
    if (m.id == id) return m;
  throw ValidationError("unknown machine '" + id + "'");
}

}  // namespace qcs
