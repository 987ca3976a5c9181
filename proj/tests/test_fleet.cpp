#include <gtest/gtest.h>

#include <random>

#include "qcs/fleet.hpp"
#include "support.hpp"

using namespace qcs;
using qcs::test::TempDir;

namespace {

const char* kMinimalFleet = R"([
  {"id": "m0", "n_qubits": 2, "coupling": [[0, 1]], "calibration_period_s": 86400, "calibration_offset_s": 0,
   "snapshots": [{"cycle": 0, "valid_from_s": 0, "cx_error": {"0-1": 0.02},
                  "readout_error": [0.03, 0.04], "single_qubit_error": [0.001, 0.001]}]}
])";

// linear scan: last snapshot whose window starts at or before t
const CalibrationSnapshot* scan_snapshot(const Machine& m, double t) {
  const CalibrationSnapshot* found = nullptr;
  for (const auto& s : m.snapshots)
    if (static_cast<double>(s.valid_from) <= t) found = &s;
  return found;
}

}  // namespace

TEST(LoadFleet, MinimalMachine) {
  TempDir dir("fleet_min");
  test::write_file(dir.file("f.json"), kMinimalFleet);
  const auto fleet = load_fleet(dir.file("f.json"));
  ASSERT_EQ(fleet.size(), 1u);
  EXPECT_EQ(fleet[0].coupling, std::vector<Edge>{Edge(0, 1)});
  EXPECT_DOUBLE_EQ(fleet[0].snapshots[0].cx_error.at(Edge(0, 1)), 0.02);
}

TEST(LoadFleet, OutOfRangeCxErrorNamesEdge) {
  std::string text = kMinimalFleet;
  text.replace(text.find("0.02"), 4, "1.2");
  try {
    fleet_from_string(text);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("0-1"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("m0"), std::string::npos) << e.what();
  }
}

TEST(LoadFleet, MalformedJsonIsParseError) {
  EXPECT_THROW(fleet_from_string("[{\"id\": "), ParseError);
  EXPECT_THROW(fleet_from_string("{}"), ParseError);
}

TEST(LoadFleet, MissingFile) { EXPECT_THROW(load_fleet("/nonexistent/fleet.json"), MissingArtifactError); }

TEST(LoadFleet, InvariantViolations) {
  auto base = test::line_machine("bad", 3);
  {
    auto m = base;
    m.coupling = {Edge(0, 1)};  // qubit 2 disconnected
    for (auto& s : m.snapshots) s.cx_error.erase(Edge(1, 2));
    EXPECT_THROW(validate(m), ValidationError);
  }
  {
    auto m = base;
    m.calibration_offset = m.calibration_period;
    EXPECT_THROW(validate(m), ValidationError);
  }
  {
    auto m = base;
    m.snapshots.erase(m.snapshots.begin() + 1);  // gap in cycles
    EXPECT_THROW(validate(m), ValidationError);
  }
  {
    auto m = base;
    m.snapshots[0].readout_error.pop_back();
    EXPECT_THROW(validate(m), ValidationError);
  }
  EXPECT_NO_THROW(validate(base));
}

TEST(GenerateFleet, DefaultFleetShape) {
  FleetSpec spec;
  spec.qubit_count_choices = {1, 5, 7, 16, 27, 65};
  const auto fleet = generate_synthetic_fleet(spec);
  ASSERT_EQ(fleet.size(), 26u);
  std::set<std::string> ids;
  for (const auto& m : fleet) {
    ids.insert(m.id);
    EXPECT_NO_THROW(validate(m));
    EXPECT_NE(std::find(spec.qubit_count_choices.begin(), spec.qubit_count_choices.end(), m.n_qubits),
              spec.qubit_count_choices.end());
    EXPECT_EQ(m.snapshots.size(), 74u);
    for (const auto& s : m.snapshots) {
      for (const auto& [e, p] : s.cx_error) {
        EXPECT_GE(p, spec.cx.min);
        EXPECT_LE(p, spec.cx.max);
      }
      for (double p : s.readout_error) {
        EXPECT_GE(p, spec.readout.min);
        EXPECT_LE(p, spec.readout.max);
      }
      for (double p : s.single_qubit_error) {
        EXPECT_GE(p, spec.single_qubit.min);
        EXPECT_LE(p, spec.single_qubit.max);
      }
    }
  }
  EXPECT_EQ(ids.size(), 26u);
}

TEST(GenerateFleet, ErrorsRedrawnEachCycle) {
  const auto fleet = generate_synthetic_fleet(FleetSpec{});
  const auto& m = fleet.front();
  EXPECT_NE(m.snapshots[0].readout_error, m.snapshots[1].readout_error);
}

TEST(GenerateFleet, DeterministicBytes) {
  FleetSpec spec;
  EXPECT_EQ(fleet_to_string(generate_synthetic_fleet(spec)), fleet_to_string(generate_synthetic_fleet(spec)));
  FleetSpec other = spec;
  other.rng_seed = spec.rng_seed + 1;
  EXPECT_NE(fleet_to_string(generate_synthetic_fleet(spec)), fleet_to_string(generate_synthetic_fleet(other)));
}

TEST(GenerateFleet, RoundTripEquality) {
  TempDir dir("fleet_rt");
  FleetSpec spec;
  spec.cycles = 5;
  spec.stagger = true;
  const auto fleet = generate_synthetic_fleet(spec);
  save_fleet(fleet, dir.file("fleet.json"));
  const auto back = load_fleet(dir.file("fleet.json"));
  ASSERT_EQ(back.size(), fleet.size());
  for (std::size_t i = 0; i < fleet.size(); ++i) EXPECT_EQ(back[i], fleet[i]) << fleet[i].id;
}

TEST(GenerateFleet, RejectsBadSpec) {
  FleetSpec spec;
  spec.cx = {0.2, 0.1};
  EXPECT_THROW(generate_synthetic_fleet(spec), ValidationError);
  spec = FleetSpec{};
  spec.readout = {0.1, 1.0};
  EXPECT_THROW(generate_synthetic_fleet(spec), ValidationError);
  spec = FleetSpec{};
  spec.machine_count = 0;
  EXPECT_THROW(generate_synthetic_fleet(spec), ValidationError);
}

TEST(SnapshotAt, BoundaryAndMidCycle) {
  const auto m = test::line_machine("m", 3, 0.01, 0.02, 4);
  EXPECT_EQ(snapshot_at(m, 86400).cycle_index, 1);
  EXPECT_EQ(snapshot_at(m, 86399.5).cycle_index, 0);
  EXPECT_EQ(snapshot_at(m, 86400 + 43200).cycle_index, 1);
  EXPECT_EQ(snapshot_at(m, 0).cycle_index, 0);
  EXPECT_THROW(snapshot_at(m, -1), OutOfRangeError);
  EXPECT_THROW(snapshot_at(m, 4 * 86400), OutOfRangeError);
}

TEST(SnapshotAt, MatchesLinearScan) {
  auto fleet = generate_synthetic_fleet(FleetSpec{});
  fleet = apply_stagger(fleet);
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto& m = fleet[gen() % fleet.size()];
    std::uniform_real_distribution<double> t(static_cast<double>(m.snapshots.front().valid_from),
                                             static_cast<double>(m.horizon_end()) - 1e-3);
    double when = t(gen);
    const auto offset = static_cast<double>(m.calibration_offset);
    if (trial % 4 == 0) when = std::floor((when - offset) / 86400) * 86400 + offset;
    const auto* expect = scan_snapshot(m, when);
    ASSERT_NE(expect, nullptr);
    EXPECT_EQ(&snapshot_at(m, when), expect) << m.id << " t=" << when;
  }
}

TEST(SnapshotAt, ConstantWithinHalfOpenWindow) {
  const auto m = test::line_machine("m", 2, 0.01, 0.02, 3);
  for (double t = 86400; t < 2 * 86400; t += 977.3) EXPECT_EQ(snapshot_at(m, t).cycle_index, 1);
}

TEST(NextCalibration, Examples) {
  const auto m = test::line_machine("m", 2);
  EXPECT_DOUBLE_EQ(next_calibration_time(m, 100), 86400);
  EXPECT_DOUBLE_EQ(next_calibration_time(m, 86400), 2 * 86400);
  EXPECT_DOUBLE_EQ(next_calibration_time(m, 0), 86400);
}

TEST(NextCalibration, GapWithinOnePeriod) {
  auto fleet = apply_stagger(generate_synthetic_fleet(FleetSpec{}));
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> t(0.0, 70 * 86400.0);
  for (int i = 0; i < 5000; ++i) {
    const auto& m = fleet[i % fleet.size()];
    double when = t(gen);
    if (i % 3 == 0) when = std::round(when);
    const double gap = next_calibration_time(m, when) - when;
    EXPECT_GT(gap, 0.0);
    EXPECT_LE(gap, static_cast<double>(m.calibration_period));
  }
}

TEST(NextCalibration, StaggeredClosedForm) {
  const auto fleet = apply_stagger(generate_synthetic_fleet(FleetSpec{}));
  const auto count = static_cast<Seconds>(fleet.size());
  for (Seconds i = 0; i < count; ++i) {
    const auto& m = fleet[static_cast<std::size_t>(i)];
    const Seconds offset = i * 86400 / count;
    // a boundary of machine i, probed from just before it
    const double boundary = 5.0 * 86400 + static_cast<double>(offset);
    EXPECT_DOUBLE_EQ(next_calibration_time(m, boundary - 0.25), boundary);
    EXPECT_EQ(static_cast<Seconds>(next_calibration_time(m, 3 * 86400)) % 86400, offset);
  }
}

TEST(Stagger, FourMachines) {
  std::vector<Machine> fleet;
  for (int i = 0; i < 4; ++i) fleet.push_back(test::line_machine("m" + std::to_string(i), 2));
  const auto staggered = apply_stagger(fleet);
  const Seconds h = 3600;
  EXPECT_EQ(staggered[0].calibration_offset, 0);
  EXPECT_EQ(staggered[1].calibration_offset, 6 * h);
  EXPECT_EQ(staggered[2].calibration_offset, 12 * h);
  EXPECT_EQ(staggered[3].calibration_offset, 18 * h);
  EXPECT_EQ(staggered[2].snapshots[1].valid_from, 86400 + 12 * h);
  for (const auto& m : staggered) EXPECT_NO_THROW(validate(m));
}

TEST(Stagger, SingleMachineUnchanged) {
  std::vector<Machine> fleet{test::line_machine("solo", 3)};
  EXPECT_EQ(apply_stagger(fleet), fleet);
}

TEST(Stagger, PairwiseCircularDistance) {
  for (std::size_t count : {2u, 3u, 7u, 26u}) {
    FleetSpec spec;
    spec.machine_count = static_cast<int>(count);
    spec.cycles = 2;
    const auto fleet = apply_stagger(generate_synthetic_fleet(spec));
    const Seconds period = spec.calibration_period;
    Seconds min_dist = period;
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        const Seconds d = std::abs(fleet[i].calibration_offset - fleet[j].calibration_offset);
        const Seconds circular = std::min(d, period - d);
        EXPECT_GE(circular, period / static_cast<Seconds>(count));
        min_dist = std::min(min_dist, circular);
      }
    }
    EXPECT_EQ(min_dist, period / static_cast<Seconds>(count));
  }
}

TEST(Stagger, MixedPeriodsRejected) {
  std::vector<Machine> fleet{test::line_machine("a", 2), test::line_machine("b", 2)};
  fleet[1].calibration_period = 43200;
  EXPECT_THROW(apply_stagger(fleet), MixedPeriodError);
}

TEST(Topology, ChainAndLattice) {
  EXPECT_EQ(default_topology(1).size(), 0u);
  EXPECT_EQ(default_topology(5).size(), 4u);
  // 16 qubits on a 4x4 lattice: 2 * 4 * 3 edges
  EXPECT_EQ(default_topology(16).size(), 24u);
  for (int n : {7, 27, 65}) EXPECT_TRUE(detail::coupling_connected(n, default_topology(n)));
}
