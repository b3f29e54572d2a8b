#ifndef WLANAGG_SWEEP_HPP
#define WLANAGG_SWEEP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wlanagg/model.hpp"
#include "wlanagg/phy.hpp"
#include "wlanagg/sim.hpp"

namespace wlanagg {

// Sweep axes mirror the validation scenarios: overall send rate, MCS
// index, spatial streams, station count, and the two-station split where
// one rate ramps up while the other ramps down.
enum class SweepAxis { SendRate, Mcs, Nss, NStations, RateSplit };

SweepAxis axis_from_string(const std::string& s);
const char* axis_name(SweepAxis axis);

// Units for send-rate values in scenario files. Mbps values refer to
// payload bits (packet_len_bits per packet).
enum class RateUnit { Pps, Mbps };

// Declarative description of one scenario (the sweep "base").
struct StationSpec {
  double send_rate = 0.0;                 // in `unit`
  double jitter_half_width = 6e-6;
  std::optional<McsConfig> mcs;           // table rate
  double phy_rate_bps = 0.0;              // explicit rate (wins over mcs)
  std::optional<std::pair<double, double>> send_rate_range;  // for rate_split
  std::vector<double> rate_process;

  double resolved_phy_rate() const;
};

struct ScenarioSpec {
  ChannelParams channel;
  bool auto_overhead = false;  // overhead_c = default_round_overhead(n)
  RateUnit unit = RateUnit::Pps;
  std::vector<StationSpec> stations;
  std::size_t rounds = 20000;
  double warmup_fraction = 0.1;
  std::uint64_t seed = 1;
  PacingModel pacing = PacingModel::Anchored;
  bool record_packets = true;
};

// Pass/fail thresholds for model-vs-simulator comparisons. A row's
// aggregation check passes when the relative error is within agg_rel OR
// the absolute error is within agg_abs packets. The fluctuation check
// applies to linear-regime rows only. The delay upper bound check is
//   sim_mean_delay <= model_delay_bound + sim_mean_airtime
// and the lower guard sim_mean_delay >= delay_lower_factor * bound (linear
// regime, packets recorded).
struct Thresholds {
  double agg_rel = 0.10;
  double agg_abs = 1.0;
  double std_rel = 0.20;
  bool check_delay = true;
  double delay_lower_factor = 0.5;
};

struct SweepSpec {
  std::string name = "sweep";
  SweepAxis axis = SweepAxis::SendRate;
  std::vector<double> points;
  std::size_t replications = 1;
  std::vector<std::uint64_t> seeds;  // optional; default base.seed + k
  ScenarioSpec base;
  Thresholds thresholds;

  std::uint64_t seed_for(std::size_t point_idx, std::size_t rep) const;
};

// One (point, replication, station) comparison record.
struct ComparisonRow {
  std::string sweep_name;
  std::size_t point_index = 0;
  double axis_value = 0.0;
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  int station = 0;
  std::string regime;
  bool model_clamped = false;

  double model_n_bar = 0.0;
  double model_n_unclamped = 0.0;
  double model_fluct_std = 0.0;
  double model_delay_bound = 0.0;
  double model_mean_round = 0.0;

  double sim_mean_agg = 0.0;
  double sim_std_agg = 0.0;
  double sim_mean_delay = 0.0;
  double sim_p95_delay = 0.0;
  double sim_mean_airtime = 0.0;
  double sim_mean_round = 0.0;
  double sim_throughput = 0.0;
  std::size_t sim_blocked = 0;

  double rel_err_agg = 0.0;   // NaN where the model value is not finite
  double abs_err_agg = 0.0;
  double rel_err_std = 0.0;   // NaN outside the linear regime

  std::string flag;  // non-empty for skipped/infeasible points
};

// Model-side inputs resolved from a scenario (send rates in pps, table or
// explicit PHY rates, harmonic mean of any rate process).
struct ModelInputs {
  ChannelParams channel;
  RateVector w;
  LoadVector x;
};
ModelInputs resolve_model_inputs(const ScenarioSpec& scenario);

// A concrete scenario for one sweep point.
ScenarioSpec apply_axis(const SweepSpec& spec, double point);

// SimConfig ready to run (seed filled by the caller).
SimConfig build_sim_config(const ScenarioSpec& scenario);

// FNV-1a over the canonical JSON form of a scenario; stable across runs.
std::string scenario_hash(const ScenarioSpec& scenario);

// Runs the full model-vs-simulator sweep. Points run in parallel; rows are
// returned in deterministic (point, replication, station) order. Model
// results are computed once per point. Infeasible points yield flagged
// rows instead of aborting.
std::vector<ComparisonRow> run_sweep(const SweepSpec& spec);

// JSON (de)serialization for scenario and sweep files (schema in README).
ScenarioSpec scenario_from_json_text(const std::string& text);
SweepSpec sweep_from_json_text(const std::string& text);
ScenarioSpec load_scenario(const std::string& path);
SweepSpec load_sweep(const std::string& path);
std::string scenario_to_json_text(const ScenarioSpec& scenario);

}  // namespace wlanagg

#endif  // WLANAGG_SWEEP_HPP
