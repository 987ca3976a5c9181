#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qcs/noise_oracle.hpp"
#include "support.hpp"

using namespace qcs;

namespace {

Machine uniform_line(int n, double cx, double ro, double sq) {
  auto m = test::line_machine("line", n, cx, ro, 1);
  for (auto& p : m.snapshots[0].single_qubit_error) p = sq;
  return m;
}

CompiledCircuit compiled(int n, std::vector<Gate> gates, std::set<int> measured) {
  CompiledCircuit cc;
  cc.n_physical = n;
  cc.physical_gates = std::move(gates);
  cc.measured_physical = std::move(measured);
  cc.depth = asap_depth(cc.physical_gates, n);
  return cc;
}

}  // namespace

TEST(AnalyticPos, ZeroErrorsGiveOne) {
  const auto m = uniform_line(3, 0.0, 0.0, 0.0);
  const auto cc = compile_for(build_benchmark("toffoli"), m, 0).circuit;
  EXPECT_EQ(analytic_pos(cc, m.snapshots[0]).pos, 1.0);
  EXPECT_EQ(sample_pos(cc, m.snapshots[0], 500, 9).pos, 1.0);
}

TEST(AnalyticPos, ReadoutOnly) {
  const auto m = uniform_line(2, 0.01, 0.1, 0.001);
  EXPECT_DOUBLE_EQ(analytic_pos(compiled(2, {}, {0}), m.snapshots[0]).pos, 0.9);
}

TEST(AnalyticPos, DirectProduct) {
  auto m = test::make_machine(
      "m", 3, {Edge(0, 1), Edge(1, 2)}, 1, [](const Edge& e, int) { return e == Edge(0, 1) ? 0.01 : 0.02; },
      [](int, int) { return 0.05; });
  const auto cc = compiled(3, {Gate::cx(0, 1), Gate::cx(1, 2)}, {0, 2});
  EXPECT_DOUBLE_EQ(analytic_pos(cc, m.snapshots[0]).pos, 0.99 * 0.98 * 0.95 * 0.95);
}

TEST(AnalyticPos, SwapCountsThreeTimes) {
  const auto m = uniform_line(2, 0.1, 0.0, 0.0);
  const auto cc = compiled(2, {Gate::swap(0, 1)}, {0});
  EXPECT_NEAR(analytic_pos(cc, m.snapshots[0]).pos, std::pow(0.9, 3), 1e-15);
}

TEST(AnalyticPos, MonotoneInErrorsAndGates) {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = test::random_machine(gen, "r", 2 + static_cast<int>(gen() % 6), 1);
    const auto c = test::random_circuit(gen, 1 + static_cast<int>(gen() % m.n_qubits), 20);
    auto cc = compile_for(c, m, 0).circuit;
    const double base = analytic_pos(cc, m.snapshots[0]).pos;
    // raise one error rate
    auto worse = m.snapshots[0];
    auto& edge_err = worse.cx_error.begin()->second;
    edge_err = std::min(0.999, edge_err + 0.1);
    worse.readout_error[0] = std::min(0.999, worse.readout_error[0] + 0.1);
    EXPECT_LE(analytic_pos(cc, worse).pos, base);
    // add a gate
    cc.physical_gates.insert(cc.physical_gates.begin(), Gate::one("x", 0));
    EXPECT_LE(analytic_pos(cc, m.snapshots[0]).pos, base);
  }
}

TEST(SamplePos, WithinFourSigmaAtHundredThousandShots) {
  const auto fleet = generate_synthetic_fleet(FleetSpec{});
  const auto& m = *std::find_if(fleet.begin(), fleet.end(), [](const Machine& x) { return x.n_qubits >= 6; });
  for (const char* name : {"toffoli", "ripple_adder", "bv"}) {
    const auto cc = compile_for(build_benchmark(name), m, 0).circuit;
    const double p = analytic_pos(cc, m.snapshots[0]).pos;
    const std::int64_t shots = 100000;
    const double est = sample_pos(cc, m.snapshots[0], shots, 1234).pos;
    EXPECT_LE(std::abs(est - p), 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(shots))) << name;
  }
}

TEST(SamplePos, DeterministicAndSeedSensitive) {
  const auto m = uniform_line(5, 0.05, 0.05, 0.01);
  const auto cc = compile_for(build_benchmark("bv"), m, 0).circuit;
  const auto a = sample_pos(cc, m.snapshots[0], 2000, 42);
  const auto b = sample_pos(cc, m.snapshots[0], 2000, 42);
  EXPECT_EQ(a.pos, b.pos);
  EXPECT_EQ(a.shots, std::optional<std::int64_t>(2000));
  EXPECT_EQ(a.seed, 42u);
  EXPECT_NE(a.pos, sample_pos(cc, m.snapshots[0], 2000, 43).pos);
}

TEST(SamplePos, SingleShotIsZeroOrOne) {
  const auto m = uniform_line(3, 0.2, 0.2, 0.1);
  const auto cc = compile_for(build_benchmark("toffoli"), m, 0).circuit;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const double p = sample_pos(cc, m.snapshots[0], 1, seed).pos;
    EXPECT_TRUE(p == 0.0 || p == 1.0);
  }
}

TEST(SamplePos, RejectsZeroShots) {
  const auto m = uniform_line(2, 0.01, 0.01, 0.01);
  EXPECT_THROW(sample_pos(compiled(2, {}, {0}), m.snapshots[0], 0, 1), ValidationError);
}
