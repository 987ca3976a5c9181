#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcs/error.hpp"

namespace qcs {

enum class GateKind { single_qubit, cx, swap, measure };

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::single_qubit: return "single_qubit";
    case GateKind::cx: return "cx";
    case GateKind::swap: return "swap";
    case GateKind::measure: return "measure";
  }
  return "?";
}

inline GateKind gate_kind_from_string(const std::string& s) {
  if (s == "single_qubit") return GateKind::single_qubit;
  if (s == "cx") return GateKind::cx;
  if (s == "swap") return GateKind::swap;
  if (s == "measure") return GateKind::measure;
  throw ParseError("unknown gate kind '" + s + "'");
}

struct Gate {
  GateKind kind = GateKind::single_qubit;
  std::array<int, 2> qubits{0, -1};  // second slot is -1 for 1-operand gates
  std::string label;

  [[nodiscard]] int arity() const { return (kind == GateKind::cx || kind == GateKind::swap) ? 2 : 1; }
  [[nodiscard]] bool two_qubit() const { return arity() == 2; }

  static Gate one(const std::string& label, int q) { return {GateKind::single_qubit, {q, -1}, label}; }
  static Gate cx(int control, int target) { return {GateKind::cx, {control, target}, "cx"}; }
  static Gate swap(int a, int b) { return {GateKind::swap, {a, b}, "swap"}; }
  static Gate measure(int q) { return {GateKind::measure, {q, -1}, "measure"}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct Circuit {
  std::string name;
  int width = 1;
  std::vector<Gate> gates;
  std::set<int> measured_qubits;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

struct CircuitStats {
  int width = 0;
  int total_gates = 0;
  int cx_count = 0;
  int logical_depth = 0;

  friend bool operator==(const CircuitStats&, const CircuitStats&) = default;
};

/// ASAP layer of every gate: 1 + the deepest earlier gate sharing an operand.
inline std::vector<int> asap_layers(const std::vector<Gate>& gates, int width) {
  std::vector<int> qubit_layer(static_cast<std::size_t>(std::max(width, 0)), 0);
  std::vector<int> layers;
  layers.reserve(gates.size());
  for (const auto& g : gates) {
    int layer = qubit_layer[g.qubits[0]];
    if (g.two_qubit()) layer = std::max(layer, qubit_layer[g.qubits[1]]);
    ++layer;
    qubit_layer[g.qubits[0]] = layer;
    if (g.two_qubit()) qubit_layer[g.qubits[1]] = layer;
    layers.push_back(layer);
  }
  return layers;
}

inline int asap_depth(const std::vector<Gate>& gates, int width) {
  const auto layers = asap_layers(gates, width);
  return layers.empty() ? 0 : *std::max_element(layers.begin(), layers.end());
}

inline CircuitStats circuit_stats(const Circuit& c) {
  CircuitStats s;
  s.width = c.width;
  s.total_gates = static_cast<int>(c.gates.size());
  s.cx_count = static_cast<int>(std::count_if(c.gates.begin(), c.gates.end(),
                                              [](const Gate& g) { return g.kind == GateKind::cx; }));
  s.logical_depth = asap_depth(c.gates, c.width);
  return s;
}

inline void validate(const Circuit& c) {
  auto fail = [&](const std::string& what) { throw ValidationError("circuit '" + c.name + "': " + what); };
  if (c.width < 1) fail("width must be positive");
  if (c.measured_qubits.empty()) fail("measured_qubits must be non-empty");
  for (int q : c.measured_qubits)
    if (q < 0 || q >= c.width) fail("measured qubit " + std::to_string(q) + " out of range");
  bool in_measure_tail = false;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    for (int k = 0; k < g.arity(); ++k)
      if (g.qubits[k] < 0 || g.qubits[k] >= c.width) fail("gate " + std::to_string(i) + " operand out of range");
    if (g.two_qubit() && g.qubits[0] == g.qubits[1]) fail("gate " + std::to_string(i) + " has repeated operands");
    if (!g.two_qubit() && g.qubits[1] != -1) fail("gate " + std::to_string(i) + " has a stray second operand");
    if (g.kind == GateKind::measure) {
      in_measure_tail = true;
    } else if (in_measure_tail) {
      fail("gate " + std::to_string(i) + " follows a measurement");
    }
  }
}

// ---------------------------------------------------------------------------
// Benchmarks

using BenchmarkParams = std::map<std::string, std::int64_t>;

namespace detail {

class CircuitBuilder {
 public:
  CircuitBuilder(std::string name, int width) {
    c_.name = std::move(name);
    c_.width = width;
  }
  CircuitBuilder& g(const std::string& label, int q) {
    c_.gates.push_back(Gate::one(label, q));
    return *this;
  }
  CircuitBuilder& cx(int control, int target) {
    c_.gates.push_back(Gate::cx(control, target));
    return *this;
  }
  /// Standard 6-CX Toffoli network.
  CircuitBuilder& ccx(int a, int b, int t) {
    g("h", t).cx(b, t).g("tdg", t).cx(a, t).g("t", t).cx(b, t).g("tdg", t).cx(a, t);
    g("t", b).g("t", t).g("h", t).cx(a, b).g("t", a).g("tdg", b).cx(a, b);
    return *this;
  }
  Circuit measure(std::initializer_list<int> qubits) {
    for (int q : qubits) {
      c_.gates.push_back(Gate::measure(q));
      c_.measured_qubits.insert(q);
    }
    return std::move(c_);
  }
  Circuit measure_all() {
    for (int q = 0; q < c_.width; ++q) {
      c_.gates.push_back(Gate::measure(q));
      c_.measured_qubits.insert(q);
    }
    return std::move(c_);
  }

 private:
  Circuit c_;
};

inline std::int64_t param(const BenchmarkParams& p, const std::string& key, std::int64_t fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

inline void allow_only(const std::string& bench, const BenchmarkParams& p, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : p) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; }))
      throw ValidationError("benchmark '" + bench + "': unknown parameter '" + k + "'");
  }
}

inline Circuit toffoli() {
  CircuitBuilder b("toffoli", 3);
  b.g("x", 0).g("x", 1).ccx(0, 1, 2);
  return b.measure_all();
}

// Simon-style hidden subgroup instance on 2 input + 2 output qubits.
inline Circuit hsp() {
  CircuitBuilder b("hsp", 4);
  b.g("h", 0).g("h", 1);
  b.cx(0, 2).cx(0, 3).cx(1, 2).cx(1, 3);
  b.g("h", 0).g("h", 1);
  return b.measure({0, 1});
}

inline Circuit bv(std::int64_t hidden) {
  CircuitBuilder b("bv", 5);
  constexpr int ancilla = 4;
  b.g("x", ancilla);
  for (int q = 0; q < 5; ++q) b.g("h", q);
  for (int q = 0; q < 4; ++q)
    if ((hidden >> q) & 1) b.cx(q, ancilla);
  for (int q = 0; q < 4; ++q) b.g("h", q);
  return b.measure({0, 1, 2, 3});
}

// 2x2 HHL-shaped solver: clock qubit 1, system qubit 0, rotation ancilla 2.
inline Circuit linear_solver() {
  CircuitBuilder b("linear_solver", 3);
  b.g("ry", 0).g("h", 1);
  b.cx(1, 0).g("rz", 0).cx(1, 0).g("h", 1);
  b.g("ry", 2).cx(1, 2).g("ry", 2).cx(1, 2);
  b.g("h", 1).cx(1, 0).g("rz", 0).cx(1, 0).g("h", 1);
  return b.measure_all();
}

inline Circuit qaoa(std::int64_t layers) {
  CircuitBuilder b("qaoa", 4);
  for (int q = 0; q < 4; ++q) b.g("h", q);
  for (std::int64_t l = 0; l < layers; ++l) {
    for (int q = 0; q < 4; ++q) {
      const int next = (q + 1) % 4;
      b.cx(q, next).g("rz", next).cx(q, next);
    }
    for (int q = 0; q < 4; ++q) b.g("rx", q);
  }
  return b.measure_all();
}

// Full: every ordered pair i < j. SCA: circular pairs rotated by the rep index,
// control and target alternating on odd reps.
inline Circuit vqe_su2(int width, std::int64_t reps, bool sca) {
  CircuitBuilder b("vqe_su2", width);
  auto rotation_layer = [&] {
    for (int q = 0; q < width; ++q) b.g("ry", q).g("rz", q);
  };
  for (std::int64_t r = 0; r < reps; ++r) {
    rotation_layer();
    if (!sca) {
      for (int i = 0; i < width; ++i)
        for (int j = i + 1; j < width; ++j) b.cx(i, j);
    } else {
      std::vector<std::pair<int, int>> pairs;
      pairs.emplace_back(width - 1, 0);
      for (int i = 0; i + 1 < width; ++i) pairs.emplace_back(i, i + 1);
      std::rotate(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(r % width), pairs.end());
      for (auto [control, target] : pairs) {
        if (r % 2 == 1) std::swap(control, target);
        b.cx(control, target);
      }
    }
  }
  rotation_layer();
  return b.measure_all();
}

// Three data qubits (0, 2, 4) with parity ancillas (1, 3).
inline Circuit repetition_encoder() {
  CircuitBuilder b("repetition_encoder", 5);
  b.g("h", 0).cx(0, 2).cx(0, 4);
  b.cx(0, 1).cx(2, 1).cx(2, 3).cx(4, 3);
  return b.measure_all();
}

// Cuccaro MAJ/UMA ripple-carry adder on 2-bit operands.
// Layout: carry-in 0, b0 1, a0 2, b1 3, a1 4, carry-out 5.
inline Circuit ripple_adder(std::int64_t a, std::int64_t bval) {
  CircuitBuilder b("ripple_adder", 6);
  if (a & 1) b.g("x", 2);
  if (a & 2) b.g("x", 4);
  if (bval & 1) b.g("x", 1);
  if (bval & 2) b.g("x", 3);
  auto maj = [&](int c, int y, int x) { b.cx(x, y).cx(x, c).ccx(c, y, x); };
  auto uma = [&](int c, int y, int x) { b.ccx(c, y, x).cx(x, c).cx(c, y); };
  maj(0, 1, 2);
  maj(2, 3, 4);
  b.cx(4, 5);
  uma(2, 3, 4);
  uma(0, 1, 2);
  return b.measure({1, 3, 5});
}

}  // namespace detail

inline const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"toffoli", "hsp",  "bv",  "linear_solver", "qaoa",
                                              "vqe_su2", "repetition_encoder", "ripple_adder"};
  return names;
}

/// Builds one benchmark circuit. Throws ValidationError on unknown names or params.
inline Circuit build_benchmark(const std::string& name, const BenchmarkParams& params = {}) {
  using detail::allow_only;
  using detail::param;
  auto invalid = [&](const std::string& what) -> ValidationError {
    return ValidationError("benchmark '" + name + "': " + what);
  };
  Circuit c;
  if (name == "toffoli") {
    allow_only(name, params, {});
    c = detail::toffoli();
  } else if (name == "hsp") {
    allow_only(name, params, {});
    c = detail::hsp();
  } else if (name == "bv") {
    allow_only(name, params, {"hidden"});
    const auto hidden = param(params, "hidden", 0b1011);
    if (hidden < 0 || hidden > 0b1111) throw invalid("hidden must be a 4-bit string");
    c = detail::bv(hidden);
  } else if (name == "linear_solver") {
    allow_only(name, params, {});
    c = detail::linear_solver();
  } else if (name == "qaoa") {
    allow_only(name, params, {"layers"});
    const auto layers = param(params, "layers", 1);
    if (layers < 1 || layers > 16) throw invalid("layers must be in [1, 16]");
    c = detail::qaoa(layers);
  } else if (name == "vqe_su2") {
    allow_only(name, params, {"width", "reps", "entanglement"});
    const auto width = param(params, "width", 4);
    if (width != 4 && width != 6) throw invalid("width must be 4 or 6");
    const auto reps = param(params, "reps", width == 4 ? 4 : 3);
    if (reps < 1 || reps > 16) throw invalid("reps must be in [1, 16]");
    const auto ent = param(params, "entanglement", width == 4 ? 0 : 1);
    if (ent != 0 && ent != 1) throw invalid("entanglement must be 0 (full) or 1 (sca)");
    c = detail::vqe_su2(static_cast<int>(width), reps, ent == 1);
  } else if (name == "repetition_encoder") {
    allow_only(name, params, {});
    c = detail::repetition_encoder();
  } else if (name == "ripple_adder") {
    allow_only(name, params, {"a", "b"});
    const auto a = param(params, "a", 1);
    const auto b = param(params, "b", 2);
    if (a < 0 || a > 3 || b < 0 || b > 3) throw invalid("operands must be 2-bit values");
    c = detail::ripple_adder(a, b);
  } else {
    throw ValidationError("unknown benchmark '" + name + "'");
  }
  validate(c);
  return c;
}

struct BenchmarkSpec {
  std::string name;
  BenchmarkParams params;
};

/// The nine evaluation benchmarks (VQE appears as 4-qubit/full and 6-qubit/SCA).
inline const std::vector<BenchmarkSpec>& standard_benchmarks() {
  static const std::vector<BenchmarkSpec> set{
      {"toffoli", {}},
      {"hsp", {}},
      {"bv", {{"hidden", 0b1011}}},
      {"linear_solver", {}},
      {"qaoa", {{"layers", 1}}},
      {"vqe_su2", {{"width", 4}, {"reps", 4}, {"entanglement", 0}}},
      {"vqe_su2", {{"width", 6}, {"reps", 3}, {"entanglement", 1}}},
      {"repetition_encoder", {}},
      {"ripple_adder", {{"a", 1}, {"b", 2}}},
  };
  return set;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json gates_to_json(const std::vector<Gate>& gates) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : gates) {
    nlohmann::json ops = nlohmann::json::array();
    for (int k = 0; k < g.arity(); ++k) ops.push_back(g.qubits[k]);
    arr.push_back({{"kind", to_string(g.kind)}, {"label", g.label}, {"operands", ops}});
  }
  return arr;
}

inline std::vector<Gate> gates_from_json(const nlohmann::json& arr) {
  std::vector<Gate> gates;
  for (const auto& jg : arr) {
    Gate g;
    g.kind = gate_kind_from_string(jg.at("kind").get<std::string>());
    g.label = jg.value("label", std::string(to_string(g.kind)));
    const auto ops = jg.at("operands").get<std::vector<int>>();
    if (static_cast<int>(ops.size()) != g.arity())
      throw ParseError("gate '" + g.label + "' has " + std::to_string(ops.size()) + " operands");
    g.qubits = {ops[0], g.arity() == 2 ? ops[1] : -1};
    gates.push_back(std::move(g));
  }
  return gates;
}

inline nlohmann::json to_json_value(const Circuit& c) {
  return {{"name", c.name}, {"width", c.width}, {"gates", gates_to_json(c.gates)}, {"measured", c.measured_qubits}};
}

inline Circuit circuit_from_json(const nlohmann::json& j) {
  Circuit c;
  try {
    c.name = j.at("name").get<std::string>();
    c.width = j.at("width").get<int>();
    c.gates = gates_from_json(j.at("gates"));
    c.measured_qubits = j.at("measured").get<std::set<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("circuit: " + std::string(e.what()));
  }
  validate(c);
  return c;
}

}  // namespace qcs
