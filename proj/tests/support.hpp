#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "qcs/circuits.hpp"
#include "qcs/fleet.hpp"
#include "qcs/predictors.hpp"
#include "qcs/scheduler.hpp"

namespace qcs::test {

/// Machine with the given coupling, `cycles` snapshots and errors chosen by
/// the callbacks (edge or qubit, cycle) -> probability.
template <typename CxFn, typename RoFn>
Machine make_machine(const std::string& id, int n, std::vector<Edge> coupling, int cycles, CxFn cx, RoFn ro,
                     Seconds period = 86400, Seconds offset = 0) {
  Machine m;
  m.id = id;
  m.n_qubits = n;
  std::sort(coupling.begin(), coupling.end());
  m.coupling = std::move(coupling);
  m.calibration_period = period;
  m.calibration_offset = offset;
  for (int c = 0; c < cycles; ++c) {
    CalibrationSnapshot s;
    s.cycle_index = c;
    s.valid_from = c * period + offset;
    for (const auto& e : m.coupling) s.cx_error[e] = cx(e, c);
    for (int q = 0; q < n; ++q) {
      s.readout_error.push_back(ro(q, c));
      s.single_qubit_error.push_back(0.001);
    }
    m.snapshots.push_back(std::move(s));
  }
  return m;
}

inline Machine line_machine(const std::string& id, int n, double cx = 0.01, double ro = 0.02, int cycles = 3) {
  std::vector<Edge> edges;
  for (int q = 0; q + 1 < n; ++q) edges.emplace_back(q, q + 1);
  return make_machine(
      id, n, edges, cycles, [&](const Edge&, int) { return cx; }, [&](int, int) { return ro; });
}

/// Random connected coupling graph: a random spanning tree plus extra edges.
inline std::vector<Edge> random_coupling(std::mt19937_64& gen, int n) {
  std::vector<Edge> edges;
  for (int q = 1; q < n; ++q) {
    std::uniform_int_distribution<int> parent(0, q - 1);
    edges.emplace_back(parent(gen), q);
  }
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int k = 0; k < n / 2; ++k) {
    const int a = pick(gen);
    const int b = pick(gen);
    if (a != b) edges.emplace_back(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

inline Machine random_machine(std::mt19937_64& gen, const std::string& id, int n, int cycles = 2) {
  std::uniform_real_distribution<double> cx(0.005, 0.06);
  std::uniform_real_distribution<double> ro(0.01, 0.12);
  return make_machine(
      id, n, random_coupling(gen, n), cycles, [&](const Edge&, int) { return cx(gen); },
      [&](int, int) { return ro(gen); });
}

inline Circuit random_circuit(std::mt19937_64& gen, int width, int gates) {
  Circuit c;
  c.name = "random";
  c.width = width;
  std::uniform_int_distribution<int> q(0, width - 1);
  std::uniform_int_distribution<int> kind(0, 2);
  for (int i = 0; i < gates; ++i) {
    const int a = q(gen);
    if (width > 1 && kind(gen) > 0) {
      int b = q(gen);
      while (b == a) b = q(gen);
      c.gates.push_back(Gate::cx(a, b));
    } else {
      c.gates.push_back(Gate::one("h", a));
    }
  }
  for (int k = 0; k < width; ++k) {
    c.gates.push_back(Gate::measure(k));
    c.measured_qubits.insert(k);
  }
  return c;
}

/// Fidelity model that rewards low CX and readout error; runtime model that
/// charges 10 s per circuit in the batch.
inline Models simple_models() {
  Models m;
  m.fidelity = ProductLinearModel::identity(FeatureVector::names());
  m.fidelity.terms[1] = {1.0, -5.0};
  m.fidelity.terms[3] = {1.0, -3.0};
  m.runtime = ProductLinearModel::identity(JobRuntimeFeatures::names());
  m.runtime.terms[0] = {0.0, 10.0};
  m.runtime_floor = 1.0;
  return m;
}

/// Scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() / ("qcs_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] std::string file(const std::string& name) const { return (path_ / name).string(); }
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace qcs::test
