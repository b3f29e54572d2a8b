// wlanagg: closed-form aggregation model and packet-level round-robin
// simulator for paced 802.11ac downlinks.
//
//   wlanagg model  --config scenario.json   closed-form results only
//   wlanagg sim    --config scenario.json   one simulation run
//   wlanagg sweep  --config sweep.json      model vs simulator comparison
//   wlanagg report --rows rows.csv          re-render plots/summary from CSV
//   wlanagg rates                           dump the VHT 80MHz rate table
//
// Config schemas are documented in the README.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wlanagg/model.hpp"
#include "wlanagg/report.hpp"
#include "wlanagg/sim.hpp"
#include "wlanagg/sweep.hpp"

namespace {

using namespace wlanagg;

void print_model(const ScenarioSpec& scenario) {
  ModelInputs in = resolve_model_inputs(scenario);
  ModelResult r = mean_aggregation(in.channel, in.w, in.x);
  std::printf("stations: %d   c: %.1f us   n_max: %d\n", in.channel.n_stations,
              in.channel.overhead_c * 1e6, in.channel.n_max);
  std::printf("rho (w'x): %.6f   mean round: %.2f us   tau: %s\n", r.rho,
              r.mean_round * 1e6,
              std::isfinite(r.tau) ? (std::to_string(r.tau * 1e6) + " us").c_str()
                                   : "n/a");
  std::printf("%-4s %-12s %-12s %-12s %-12s %-12s %-10s\n", "i", "x [pkt/s]",
              "R [Mbps]", "n_bar", "fluct_std", "delay [us]", "regime");
  for (std::size_t i = 0; i < in.x.size(); ++i) {
    std::printf("%-4zu %-12.1f %-12.2f %-12.4f %-12.4f %-12.2f %-10s\n", i,
                in.x.x[i], in.w.r_bar[i] / 1e6, r.n_bar[i], r.fluct_std[i],
                r.delay_bound[i] * 1e6, regime_name(r.regime[i]));
  }
}

int run_sim_verb(const std::string& config_path, std::size_t rounds_override,
                 std::uint64_t seed_override, bool have_seed,
                 const std::string& out_dir, bool write_trace) {
  ScenarioSpec scenario = load_scenario(config_path);
  if (rounds_override) scenario.rounds = rounds_override;
  if (have_seed) scenario.seed = seed_override;
  SimConfig cfg = build_sim_config(scenario);
  SimTrace trace = run(cfg);
  SimStats stats = collect_stats(trace, cfg.warmup_fraction);

  std::printf("rounds: %zu (post-warmup %zu)   mean round: %.2f us   seed: %llu\n",
              trace.rounds(), stats.rounds_used, stats.mean_round * 1e6,
              static_cast<unsigned long long>(cfg.seed));
  if (stats.blocked_total > 0) {
    std::printf("note: %zu blocked frames; load is below the model envelope\n",
                stats.blocked_total);
  }
  std::printf("%-4s %-10s %-10s %-12s %-12s %-12s %-10s\n", "i", "mean_agg",
              "std_agg", "delay [us]", "p95 [us]", "thpt [pkt/s]", "blocked");
  for (std::size_t i = 0; i < stats.station.size(); ++i) {
    const StationStats& st = stats.station[i];
    std::printf("%-4zu %-10.4f %-10.4f %-12.2f %-12.2f %-12.1f %-10zu\n", i,
                st.mean_agg, st.std_agg, st.mean_delay * 1e6, st.p95_delay * 1e6,
                st.throughput_pps, st.blocked_frames);
  }
  if (write_trace) {
    std::filesystem::create_directories(out_dir);
    const std::string rpath = out_dir + "/rounds.csv";
    const std::string ppath = out_dir + "/packets.csv";
    std::ofstream(rpath, std::ios::binary) << rounds_csv(trace);
    std::ofstream(ppath, std::ios::binary) << packets_csv(trace);
    std::printf("trace written: %s, %s\n", rpath.c_str(), ppath.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"paced 802.11ac downlink aggregation: model, simulator, sweeps"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", rows_path, name = "report";
  std::size_t rounds = 0;
  std::uint64_t seed = 0;
  bool trace = false;
  Thresholds thresholds;
  bool no_delay_check = false;

  CLI::App* model_cmd = app.add_subcommand("model", "closed-form model only");
  model_cmd->add_option("--config", config_path, "scenario JSON")->required();

  CLI::App* sim_cmd = app.add_subcommand("sim", "run one scenario");
  sim_cmd->add_option("--config", config_path, "scenario JSON")->required();
  sim_cmd->add_option("--rounds", rounds, "override round count");
  CLI::Option* seed_opt = sim_cmd->add_option("--seed", seed, "override seed");
  sim_cmd->add_option("--out-dir", out_dir, "trace output directory");
  sim_cmd->add_flag("--trace", trace, "write rounds.csv/packets.csv");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "model-vs-sim sweep");
  sweep_cmd->add_option("--config", config_path, "sweep JSON")->required();
  sweep_cmd->add_option("--out-dir", out_dir, "report output directory");
  sweep_cmd->add_option("--rounds", rounds, "override rounds per replication");
  CLI::Option* sweep_seed_opt = sweep_cmd->add_option("--seed", seed, "override base seed");
  sweep_cmd->add_option("--agg-rel", thresholds.agg_rel, "aggregation rel-err threshold");
  sweep_cmd->add_option("--agg-abs", thresholds.agg_abs, "aggregation abs-err threshold [pkts]");
  sweep_cmd->add_option("--std-rel", thresholds.std_rel, "fluct-std rel-err threshold");
  sweep_cmd->add_flag("--no-delay-check", no_delay_check, "skip delay bound checks");

  CLI::App* report_cmd = app.add_subcommand("report", "re-render from rows CSV");
  report_cmd->add_option("--rows", rows_path, "rows CSV from a sweep")->required();
  report_cmd->add_option("--out-dir", out_dir, "output directory");
  report_cmd->add_option("--name", name, "output file stem");
  report_cmd->add_option("--agg-rel", thresholds.agg_rel, "aggregation rel-err threshold");
  report_cmd->add_option("--agg-abs", thresholds.agg_abs, "aggregation abs-err threshold [pkts]");
  report_cmd->add_option("--std-rel", thresholds.std_rel, "fluct-std rel-err threshold");
  report_cmd->add_flag("--no-delay-check", no_delay_check, "skip delay bound checks");

  CLI::App* rates_cmd = app.add_subcommand("rates", "dump VHT 80MHz rate table CSV");
  std::string rates_out;
  rates_cmd->add_option("--out", rates_out, "write to file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (model_cmd->parsed()) {
      print_model(load_scenario(config_path));
      return 0;
    }
    if (sim_cmd->parsed()) {
      return run_sim_verb(config_path, rounds, seed, seed_opt->count() > 0,
                          out_dir, trace);
    }
    if (sweep_cmd->parsed()) {
      SweepSpec spec = load_sweep(config_path);
      if (rounds) spec.base.rounds = rounds;
      if (sweep_seed_opt->count() > 0) spec.base.seed = seed;
      // CLI threshold flags override config-file thresholds only when given
      if (sweep_cmd->count("--agg-rel")) spec.thresholds.agg_rel = thresholds.agg_rel;
      if (sweep_cmd->count("--agg-abs")) spec.thresholds.agg_abs = thresholds.agg_abs;
      if (sweep_cmd->count("--std-rel")) spec.thresholds.std_rel = thresholds.std_rel;
      if (no_delay_check) spec.thresholds.check_delay = false;
      std::vector<ComparisonRow> rows = run_sweep(spec);
      SweepSummary summary = emit_report(rows, spec.thresholds, out_dir, spec.name);
      std::cout << summary.to_text();
      std::printf("report written under %s/\n", out_dir.c_str());
      return summary.pass ? 0 : 1;
    }
    if (report_cmd->parsed()) {
      std::vector<ComparisonRow> rows = load_rows_csv(rows_path);
      if (no_delay_check) thresholds.check_delay = false;
      SweepSummary summary = emit_report(rows, thresholds, out_dir, name);
      std::cout << summary.to_text();
      return summary.pass ? 0 : 1;
    }
    if (rates_cmd->parsed()) {
      if (rates_out.empty()) {
        std::cout << vht80_rate_table_csv();
      } else {
        std::ofstream(rates_out, std::ios::binary) << vht80_rate_table_csv();
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
