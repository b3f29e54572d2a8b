#include "wlanagg/sweep.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wlanagg/report.hpp"

namespace wlanagg {
namespace {

const char* kMinimalScenario = R"json({
  "stations": [ {"send_rate": 8333, "mcs": 9, "nss": 2} ]
})json";

const char* kSweepJson = R"json({
  "name": "toy",
  "axis": "send_rate",
  "points": [8000, 16000],
  "replications": 2,
  "seeds": [11, 12],
  "base": {
    "channel": {"overhead_c": 270e-6},
    "stations": [ {"send_rate": 0, "mcs": 9, "nss": 2, "jitter_half_width": 6e-6} ],
    "rounds": 1500,
    "seed": 1
  }
})json";

TEST(ScenarioJson, DefaultsAndRoundTrip) {
  ScenarioSpec sc = scenario_from_json_text(kMinimalScenario);
  EXPECT_EQ(sc.stations.size(), 1u);
  EXPECT_EQ(sc.channel.n_stations, 1);
  EXPECT_DOUBLE_EQ(sc.channel.overhead_c, 270e-6);
  EXPECT_EQ(sc.channel.n_max, 64);
  EXPECT_EQ(sc.rounds, 20000u);
  EXPECT_EQ(sc.pacing, PacingModel::Anchored);

  ScenarioSpec again = scenario_from_json_text(scenario_to_json_text(sc));
  EXPECT_EQ(scenario_to_json_text(again), scenario_to_json_text(sc));
  EXPECT_EQ(scenario_hash(again), scenario_hash(sc));
}

TEST(ScenarioJson, AutoOverheadFollowsStationCount) {
  ScenarioSpec sc = scenario_from_json_text(R"({
    "channel": {"overhead_c": "auto"},
    "stations": [ {"send_rate": 1000, "mcs": 4, "nss": 3},
                  {"send_rate": 1000, "mcs": 4, "nss": 3} ]
  })");
  EXPECT_TRUE(sc.auto_overhead);
  EXPECT_DOUBLE_EQ(sc.channel.overhead_c, 320e-6);
}

TEST(ScenarioJson, Errors) {
  EXPECT_THROW(scenario_from_json_text(R"({"stations": []})"), std::invalid_argument);
  EXPECT_THROW(scenario_from_json_text(R"({"channel": {"overhead_c": "x"},
      "stations": [{"send_rate": 1, "mcs": 0}]})"), std::invalid_argument);
}

TEST(ResolveModel, McsMbpsAndRateProcess) {
  ScenarioSpec sc = scenario_from_json_text(R"({
    "unit": "mbps",
    "stations": [ {"send_rate": 100, "mcs": 9, "nss": 2} ]
  })");
  ModelInputs in = resolve_model_inputs(sc);
  EXPECT_NEAR(in.x.x[0], 8333.3333333, 1e-4);
  EXPECT_NEAR(in.w.r_bar[0], 780e6, 1);

  ScenarioSpec proc = scenario_from_json_text(R"({
    "stations": [ {"send_rate": 1000, "rate_process": [100e6, 400e6]} ]
  })");
  ModelInputs in2 = resolve_model_inputs(proc);
  EXPECT_DOUBLE_EQ(in2.w.r_bar[0], 160e6);  // harmonic mean
}

TEST(ApplyAxisTest, AllAxes) {
  SweepSpec spec;
  spec.base = scenario_from_json_text(kMinimalScenario);

  spec.axis = SweepAxis::SendRate;
  EXPECT_DOUBLE_EQ(apply_axis(spec, 500.0).stations[0].send_rate, 500.0);

  spec.axis = SweepAxis::Mcs;
  EXPECT_EQ(apply_axis(spec, 3.0).stations[0].mcs->mcs_index, 3);

  spec.axis = SweepAxis::Nss;
  EXPECT_EQ(apply_axis(spec, 1.0).stations[0].mcs->nss, 1);

  spec.axis = SweepAxis::NStations;
  spec.base.auto_overhead = true;
  ScenarioSpec n3 = apply_axis(spec, 3.0);
  EXPECT_EQ(n3.stations.size(), 3u);
  EXPECT_EQ(n3.channel.n_stations, 3);
  EXPECT_DOUBLE_EQ(n3.channel.overhead_c, default_round_overhead(3));

  spec.axis = SweepAxis::RateSplit;
  EXPECT_THROW(apply_axis(spec, 0.5), std::invalid_argument);
  spec.base.stations[0].send_rate_range = {{1000.0, 3000.0}};
  EXPECT_DOUBLE_EQ(apply_axis(spec, 0.5).stations[0].send_rate, 2000.0);
}

TEST(RunSweep, DeterministicRowsInOrder) {
  SweepSpec spec = sweep_from_json_text(kSweepJson);
  std::vector<ComparisonRow> rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 4u);  // 2 points x 2 reps x 1 station
  EXPECT_EQ(rows[0].point_index, 0u);
  EXPECT_EQ(rows[0].replication, 0u);
  EXPECT_EQ(rows[1].replication, 1u);
  EXPECT_EQ(rows[2].point_index, 1u);
  EXPECT_EQ(rows[0].seed, 11u);
  EXPECT_EQ(rows[1].seed, 12u);
  for (const ComparisonRow& r : rows) {
    EXPECT_TRUE(r.flag.empty()) << r.flag;
    EXPECT_EQ(r.config_hash.size(), 16u);
    EXPECT_TRUE(std::isfinite(r.sim_mean_agg));
    EXPECT_TRUE(std::isfinite(r.model_n_bar));
  }
  // same point, same seed -> identical sim results regardless of replication
  std::vector<ComparisonRow> rows2 = run_sweep(spec);
  EXPECT_EQ(rows_to_csv(rows), rows_to_csv(rows2));
  // model computed once per point: hash identical across reps
  EXPECT_EQ(rows[0].config_hash, rows[1].config_hash);
  EXPECT_NE(rows[0].config_hash, rows[2].config_hash);
}

TEST(RunSweep, InfeasiblePointFlaggedNotAborted) {
  SweepSpec spec = sweep_from_json_text(kSweepJson);
  // second point: spacing 1/x < jitter half-width -> config error
  spec.points = {8000.0, 400000.0};
  std::vector<ComparisonRow> rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_TRUE(rows[0].flag.empty());
  EXPECT_FALSE(rows[2].flag.empty());
  EXPECT_FALSE(rows[3].flag.empty());
}

TEST(RunSweep, EmptyPointsIsUsageError) {
  SweepSpec spec = sweep_from_json_text(kSweepJson);
  spec.points.clear();
  EXPECT_THROW(run_sweep(spec), std::invalid_argument);
}

TEST(Report, EmptyRowsErrorBeforeAnyFileWritten) {
  const std::string dir = std::filesystem::temp_directory_path() / "wlanagg_empty_report";
  std::filesystem::remove_all(dir);
  std::vector<ComparisonRow> rows;
  EXPECT_THROW(emit_report(rows, Thresholds{}, dir, "x"), std::invalid_argument);
  EXPECT_FALSE(std::filesystem::exists(dir));
}

TEST(Report, CsvRoundTripAndByteIdenticalEmission) {
  SweepSpec spec = sweep_from_json_text(kSweepJson);
  std::vector<ComparisonRow> rows = run_sweep(spec);

  const std::string csv = rows_to_csv(rows);
  std::vector<ComparisonRow> parsed = rows_from_csv_text(csv);
  EXPECT_EQ(rows_to_csv(parsed), csv);

  const std::string dir = std::filesystem::temp_directory_path() / "wlanagg_report_test";
  std::filesystem::remove_all(dir);
  SweepSummary s1 = emit_report(rows, spec.thresholds, dir, "toy");
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string csv1 = slurp(dir + "/toy_rows.csv");
  const std::string svg1 = slurp(dir + "/toy_agg.svg");
  SweepSummary s2 = emit_report(rows, spec.thresholds, dir, "toy");
  EXPECT_EQ(slurp(dir + "/toy_rows.csv"), csv1);
  EXPECT_EQ(slurp(dir + "/toy_agg.svg"), svg1);
  EXPECT_EQ(s1.pass, s2.pass);

  EXPECT_NE(svg1.find("<svg"), std::string::npos);
  EXPECT_NE(svg1.find("circle"), std::string::npos);   // sim markers
  EXPECT_NE(svg1.find("polyline"), std::string::npos); // model line
  std::filesystem::remove_all(dir);
}

TEST(Report, SingleRowSweepIsValid) {
  SweepSpec spec = sweep_from_json_text(kSweepJson);
  spec.points = {8000.0};
  spec.replications = 1;
  std::vector<ComparisonRow> rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 1u);
  const std::string dir = std::filesystem::temp_directory_path() / "wlanagg_single_row";
  std::filesystem::remove_all(dir);
  SweepSummary s = emit_report(rows, spec.thresholds, dir, "one");
  EXPECT_EQ(s.rows, 1u);
  EXPECT_TRUE(std::filesystem::exists(dir + "/one_agg.svg"));
  std::filesystem::remove_all(dir);
}

TEST(Summarize, ThresholdLogic) {
  ComparisonRow ok;
  ok.sweep_name = "s";
  ok.regime = "linear";
  ok.model_n_bar = 10.0;
  ok.sim_mean_agg = 10.5;
  ok.rel_err_agg = 0.05;
  ok.abs_err_agg = 0.5;
  ok.model_fluct_std = 1.0;
  ok.sim_std_agg = 1.1;
  ok.rel_err_std = 0.1;
  ok.model_delay_bound = 1e-3;
  ok.sim_mean_delay = 0.9e-3;
  ok.sim_mean_airtime = 0.2e-3;

  ComparisonRow bad_agg = ok;
  bad_agg.rel_err_agg = 0.5;
  bad_agg.abs_err_agg = 5.0;

  ComparisonRow small_abs_ok = ok;  // 50% off but only 0.4 packets
  small_abs_ok.model_n_bar = 0.8;
  small_abs_ok.rel_err_agg = 0.5;
  small_abs_ok.abs_err_agg = 0.4;

  ComparisonRow bad_delay = ok;
  bad_delay.sim_mean_delay = 2e-3;  // above bound + airtime

  ComparisonRow flagged = ok;
  flagged.flag = "infeasible";
  flagged.rel_err_agg = 9.0;

  Thresholds th;
  {
    std::vector<ComparisonRow> rows{ok, small_abs_ok, flagged};
    SweepSummary s = summarize(rows, th);
    EXPECT_TRUE(s.pass);
    EXPECT_EQ(s.flagged, 1u);
  }
  {
    std::vector<ComparisonRow> rows{ok, bad_agg};
    EXPECT_FALSE(summarize(rows, th).pass);
  }
  {
    std::vector<ComparisonRow> rows{ok, bad_delay};
    EXPECT_FALSE(summarize(rows, th).pass);
    th.check_delay = false;
    EXPECT_TRUE(summarize(rows, th).pass);
  }
}

TEST(SweepJson, ThresholdOverridesParsed) {
  SweepSpec spec = sweep_from_json_text(R"({
    "name": "t", "axis": "mcs", "points": [0, 9],
    "thresholds": {"agg_rel": 0.25, "check_delay": false},
    "base": {"stations": [ {"send_rate": 1000, "mcs": 0, "nss": 3} ]}
  })");
  EXPECT_DOUBLE_EQ(spec.thresholds.agg_rel, 0.25);
  EXPECT_FALSE(spec.thresholds.check_delay);
  EXPECT_DOUBLE_EQ(spec.thresholds.agg_abs, 1.0);
}

}  // namespace
}  // namespace wlanagg
