#include "wlanagg/sweep.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace wlanagg {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double to_pps(double value, RateUnit unit, const ChannelParams& channel) {
  return unit == RateUnit::Pps ? value : value * 1e6 / channel.packet_len_bits;
}

GuardInterval gi_from_string(const std::string& s) {
  if (s == "long") return GuardInterval::Long;
  if (s == "short") return GuardInterval::Short;
  throw std::invalid_argument("unknown guard interval: " + s);
}

PacingModel pacing_from_string(const std::string& s) {
  if (s == "anchored") return PacingModel::Anchored;
  if (s == "renewal") return PacingModel::Renewal;
  throw std::invalid_argument("unknown pacing model: " + s);
}

json station_to_json(const StationSpec& st) {
  json j;
  j["send_rate"] = st.send_rate;
  j["jitter_half_width"] = st.jitter_half_width;
  if (st.phy_rate_bps > 0) j["phy_rate"] = st.phy_rate_bps;
  if (st.mcs) {
    j["mcs"] = st.mcs->mcs_index;
    j["nss"] = st.mcs->nss;
    j["gi"] = st.mcs->gi == GuardInterval::Long ? "long" : "short";
  }
  if (st.send_rate_range) {
    j["send_rate_range"] = {st.send_rate_range->first, st.send_rate_range->second};
  }
  if (!st.rate_process.empty()) j["rate_process"] = st.rate_process;
  return j;
}

StationSpec station_from_json(const json& j) {
  StationSpec st;
  st.send_rate = j.value("send_rate", 0.0);
  st.jitter_half_width = j.value("jitter_half_width", 6e-6);
  if (j.contains("phy_rate")) st.phy_rate_bps = j.at("phy_rate").get<double>();
  if (j.contains("mcs")) {
    McsConfig cfg;
    cfg.mcs_index = j.at("mcs").get<int>();
    cfg.nss = j.value("nss", 1);
    cfg.gi = gi_from_string(j.value("gi", std::string("long")));
    st.mcs = cfg;
  }
  if (j.contains("send_rate_range")) {
    auto r = j.at("send_rate_range");
    st.send_rate_range = {r.at(0).get<double>(), r.at(1).get<double>()};
  }
  if (j.contains("rate_process")) {
    st.rate_process = j.at("rate_process").get<std::vector<double>>();
  }
  return st;
}

json scenario_to_json(const ScenarioSpec& sc) {
  json j;
  json ch;
  ch["overhead_c"] = sc.auto_overhead ? json("auto") : json(sc.channel.overhead_c);
  ch["n_max"] = sc.channel.n_max;
  ch["packet_len_bits"] = sc.channel.packet_len_bits;
  ch["mac_overhead_bits"] = sc.channel.mac_overhead_bits;
  ch["backoff_slot"] = sc.channel.backoff_slot;
  ch["cw_min"] = sc.channel.cw_min;
  j["channel"] = ch;
  j["unit"] = sc.unit == RateUnit::Pps ? "pps" : "mbps";
  json stations = json::array();
  for (const StationSpec& st : sc.stations) stations.push_back(station_to_json(st));
  j["stations"] = stations;
  j["rounds"] = sc.rounds;
  j["warmup_fraction"] = sc.warmup_fraction;
  j["seed"] = sc.seed;
  j["pacing"] = sc.pacing == PacingModel::Anchored ? "anchored" : "renewal";
  j["record_packets"] = sc.record_packets;
  return j;
}

ScenarioSpec scenario_from_json(const json& j) {
  ScenarioSpec sc;
  if (j.contains("channel")) {
    const json& ch = j.at("channel");
    if (ch.contains("overhead_c")) {
      if (ch.at("overhead_c").is_string()) {
        if (ch.at("overhead_c").get<std::string>() != "auto") {
          throw std::invalid_argument("channel.overhead_c: number or \"auto\"");
        }
        sc.auto_overhead = true;
      } else {
        sc.channel.overhead_c = ch.at("overhead_c").get<double>();
      }
    }
    sc.channel.n_max = ch.value("n_max", 64);
    sc.channel.packet_len_bits = ch.value("packet_len_bits", 12000.0);
    sc.channel.mac_overhead_bits = ch.value("mac_overhead_bits", 208.0);
    sc.channel.backoff_slot = ch.value("backoff_slot", 9e-6);
    sc.channel.cw_min = ch.value("cw_min", 16);
  }
  sc.unit = j.value("unit", std::string("pps")) == "mbps" ? RateUnit::Mbps : RateUnit::Pps;
  if (!j.contains("stations") || j.at("stations").empty()) {
    throw std::invalid_argument("scenario: at least one station required");
  }
  for (const json& s : j.at("stations")) sc.stations.push_back(station_from_json(s));
  sc.channel.n_stations = static_cast<int>(sc.stations.size());
  if (sc.auto_overhead) {
    sc.channel.overhead_c = default_round_overhead(sc.channel.n_stations);
  }
  sc.rounds = j.value("rounds", std::size_t{20000});
  sc.warmup_fraction = j.value("warmup_fraction", 0.1);
  sc.seed = j.value("seed", std::uint64_t{1});
  sc.pacing = pacing_from_string(j.value("pacing", std::string("anchored")));
  sc.record_packets = j.value("record_packets", true);
  return sc;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

double StationSpec::resolved_phy_rate() const {
  if (!rate_process.empty()) return harmonic_mean_rate(rate_process);
  if (phy_rate_bps > 0.0) return phy_rate_bps;
  if (mcs) return phy_rate(*mcs);
  throw std::invalid_argument("station: needs phy_rate, mcs, or rate_process");
}

SweepAxis axis_from_string(const std::string& s) {
  if (s == "send_rate") return SweepAxis::SendRate;
  if (s == "mcs") return SweepAxis::Mcs;
  if (s == "nss") return SweepAxis::Nss;
  if (s == "n_stations") return SweepAxis::NStations;
  if (s == "rate_split") return SweepAxis::RateSplit;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::SendRate: return "send_rate";
    case SweepAxis::Mcs: return "mcs";
    case SweepAxis::Nss: return "nss";
    case SweepAxis::NStations: return "n_stations";
    case SweepAxis::RateSplit: return "rate_split";
  }
  return "?";
}

std::uint64_t SweepSpec::seed_for(std::size_t point_idx, std::size_t rep) const {
  if (rep < seeds.size()) return seeds[rep];
  return base.seed + 1000003ULL * point_idx + rep;
}

ModelInputs resolve_model_inputs(const ScenarioSpec& scenario) {
  ModelInputs in;
  in.channel = scenario.channel;
  std::vector<double> rates;
  rates.reserve(scenario.stations.size());
  for (const StationSpec& st : scenario.stations) {
    rates.push_back(st.resolved_phy_rate());
    in.x.x.push_back(to_pps(st.send_rate, scenario.unit, scenario.channel));
  }
  in.w = build_rate_vector(in.channel, rates);
  return in;
}

ScenarioSpec apply_axis(const SweepSpec& spec, double point) {
  ScenarioSpec sc = spec.base;
  switch (spec.axis) {
    case SweepAxis::SendRate:
      for (StationSpec& st : sc.stations) st.send_rate = point;
      break;
    case SweepAxis::Mcs:
      for (StationSpec& st : sc.stations) {
        if (!st.mcs) throw std::invalid_argument("mcs axis requires mcs-configured stations");
        st.mcs->mcs_index = static_cast<int>(std::lround(point));
      }
      break;
    case SweepAxis::Nss:
      for (StationSpec& st : sc.stations) {
        if (!st.mcs) throw std::invalid_argument("nss axis requires mcs-configured stations");
        st.mcs->nss = static_cast<int>(std::lround(point));
      }
      break;
    case SweepAxis::NStations: {
      const int n = static_cast<int>(std::lround(point));
      if (n < 1) throw std::invalid_argument("n_stations axis: point must be >= 1");
      if (sc.stations.empty()) throw std::invalid_argument("n_stations axis: need a template station");
      sc.stations.assign(static_cast<std::size_t>(n), sc.stations[0]);
      sc.channel.n_stations = n;
      if (sc.auto_overhead) sc.channel.overhead_c = default_round_overhead(n);
      break;
    }
    case SweepAxis::RateSplit:
      for (StationSpec& st : sc.stations) {
        if (!st.send_rate_range) {
          throw std::invalid_argument("rate_split axis requires send_rate_range on every station");
        }
        st.send_rate = st.send_rate_range->first +
                       point * (st.send_rate_range->second - st.send_rate_range->first);
      }
      break;
  }
  return sc;
}

SimConfig build_sim_config(const ScenarioSpec& scenario) {
  SimConfig cfg;
  cfg.channel = scenario.channel;
  cfg.channel.n_stations = static_cast<int>(scenario.stations.size());
  for (const StationSpec& st : scenario.stations) {
    StationProfile p;
    p.send_rate_pps = to_pps(st.send_rate, scenario.unit, scenario.channel);
    p.jitter_half_width = st.jitter_half_width;
    p.phy_rate_bps = st.resolved_phy_rate();
    p.rate_process = st.rate_process;
    cfg.stations.push_back(std::move(p));
  }
  cfg.per_frame_overhead = derive_overhead(cfg.channel);
  cfg.rounds = scenario.rounds;
  cfg.warmup_fraction = scenario.warmup_fraction;
  cfg.seed = scenario.seed;
  cfg.pacing = scenario.pacing;
  cfg.record_packets = scenario.record_packets;
  return cfg;
}

std::string scenario_hash(const ScenarioSpec& scenario) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(scenario_to_json(scenario).dump())));
  return buf;
}

namespace {

// All rows for one (point, replication). Failures become flagged rows.
std::vector<ComparisonRow> run_point(const SweepSpec& spec, std::size_t pi,
                                     std::size_t rep, const ScenarioSpec& scenario,
                                     const ModelResult* model,
                                     const std::string& hash,
                                     const std::string& model_error) {
  const double point = spec.points[pi];
  // A failed apply_axis can leave the scenario without stations; still emit
  // one flagged row per base station so the point is visible in the report.
  const std::size_t n = scenario.stations.empty()
                            ? std::max<std::size_t>(spec.base.stations.size(), 1)
                            : scenario.stations.size();
  std::vector<ComparisonRow> rows;
  rows.reserve(n);

  auto base_row = [&](std::size_t st) {
    ComparisonRow r;
    r.sweep_name = spec.name;
    r.point_index = pi;
    r.axis_value = point;
    r.replication = rep;
    r.seed = spec.seed_for(pi, rep);
    r.config_hash = hash;
    r.station = static_cast<int>(st);
    r.model_n_bar = kNaN;
    r.model_n_unclamped = kNaN;
    r.model_fluct_std = kNaN;
    r.model_delay_bound = kNaN;
    r.model_mean_round = kNaN;
    r.sim_mean_agg = kNaN;
    r.sim_std_agg = kNaN;
    r.sim_mean_delay = kNaN;
    r.sim_p95_delay = kNaN;
    r.sim_mean_airtime = kNaN;
    r.sim_mean_round = kNaN;
    r.sim_throughput = kNaN;
    r.rel_err_agg = kNaN;
    r.abs_err_agg = kNaN;
    r.rel_err_std = kNaN;
    return r;
  };

  if (!model_error.empty()) {
    for (std::size_t st = 0; st < n; ++st) {
      ComparisonRow r = base_row(st);
      r.regime = "n/a";
      r.flag = model_error;
      rows.push_back(std::move(r));
    }
    return rows;
  }

  std::string sim_error;
  SimStats stats;
  try {
    SimConfig cfg = build_sim_config(scenario);
    cfg.seed = spec.seed_for(pi, rep);
    SimTrace trace = run(cfg);
    stats = collect_stats(trace, cfg.warmup_fraction);
  } catch (const std::exception& e) {
    sim_error = e.what();
  }

  for (std::size_t st = 0; st < n; ++st) {
    ComparisonRow r = base_row(st);
    r.regime = regime_name(model->regime[st]);
    r.model_clamped = model->any_clamped;
    r.model_n_bar = model->n_bar[st];
    r.model_n_unclamped = model->n_bar_unclamped[st];
    r.model_fluct_std = model->fluct_std[st];
    r.model_delay_bound = model->delay_bound[st];
    r.model_mean_round = model->mean_round;
    if (sim_error.empty()) {
      const StationStats& ss = stats.station[st];
      r.sim_mean_agg = ss.mean_agg;
      r.sim_std_agg = ss.std_agg;
      r.sim_mean_delay = ss.mean_delay;
      r.sim_p95_delay = ss.p95_delay;
      r.sim_mean_airtime = ss.mean_airtime;
      r.sim_mean_round = stats.mean_round;
      r.sim_throughput = ss.throughput_pps;
      r.sim_blocked = ss.blocked_frames;
      if (std::isfinite(r.model_n_bar)) {
        r.abs_err_agg = std::abs(ss.mean_agg - r.model_n_bar);
        r.rel_err_agg = r.abs_err_agg / r.model_n_bar;
      }
      if (model->regime[st] == Regime::Linear && std::isfinite(r.model_fluct_std) &&
          r.model_fluct_std > 0.0) {
        r.rel_err_std = std::abs(ss.std_agg - r.model_fluct_std) / r.model_fluct_std;
      }
    } else {
      r.flag = sim_error;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

std::vector<ComparisonRow> run_sweep(const SweepSpec& spec) {
  if (spec.points.empty()) throw std::invalid_argument("run_sweep: no sweep points");
  if (spec.replications < 1) throw std::invalid_argument("run_sweep: replications must be >= 1");

  struct PointCtx {
    ScenarioSpec scenario;
    ModelResult model;
    std::string hash;
    std::string error;
  };
  std::vector<PointCtx> ctx(spec.points.size());
  for (std::size_t pi = 0; pi < spec.points.size(); ++pi) {
    PointCtx& c = ctx[pi];
    try {
      c.scenario = apply_axis(spec, spec.points[pi]);
      c.hash = scenario_hash(c.scenario);
      ModelInputs in = resolve_model_inputs(c.scenario);
      c.model = mean_aggregation(in.channel, in.w, in.x);
    } catch (const std::exception& e) {
      c.error = e.what();
      if (c.hash.empty()) c.hash = "-";
    }
  }

  // Parallel over (point, replication); merged in deterministic order.
  const std::size_t jobs = spec.points.size() * spec.replications;
  std::vector<std::vector<ComparisonRow>> results(jobs);
  const unsigned workers = std::max(1u, std::min<unsigned>(
      std::thread::hardware_concurrency(), static_cast<unsigned>(jobs)));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t j = next.fetch_add(1); j < jobs; j = next.fetch_add(1)) {
        const std::size_t pi = j / spec.replications;
        const std::size_t rep = j % spec.replications;
        const PointCtx& c = ctx[pi];
        results[j] = run_point(spec, pi, rep, c.scenario,
                               c.error.empty() ? &c.model : nullptr, c.hash, c.error);
      }
    });
  }
  for (std::thread& t : pool) t.join();

  std::vector<ComparisonRow> rows;
  for (std::vector<ComparisonRow>& part : results) {
    for (ComparisonRow& r : part) rows.push_back(std::move(r));
  }
  return rows;
}

ScenarioSpec scenario_from_json_text(const std::string& text) {
  return scenario_from_json(json::parse(text));
}

std::string scenario_to_json_text(const ScenarioSpec& scenario) {
  return scenario_to_json(scenario).dump(2) + "\n";
}

SweepSpec sweep_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  SweepSpec spec;
  spec.name = j.value("name", std::string("sweep"));
  spec.axis = axis_from_string(j.value("axis", std::string("send_rate")));
  if (!j.contains("points") || j.at("points").empty()) {
    throw std::invalid_argument("sweep: points must be non-empty");
  }
  spec.points = j.at("points").get<std::vector<double>>();
  spec.replications = j.value("replications", std::size_t{1});
  if (j.contains("seeds")) spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (!j.contains("base")) throw std::invalid_argument("sweep: missing base scenario");
  spec.base = scenario_from_json(j.at("base"));
  if (j.contains("thresholds")) {
    const json& t = j.at("thresholds");
    spec.thresholds.agg_rel = t.value("agg_rel", spec.thresholds.agg_rel);
    spec.thresholds.agg_abs = t.value("agg_abs", spec.thresholds.agg_abs);
    spec.thresholds.std_rel = t.value("std_rel", spec.thresholds.std_rel);
    spec.thresholds.check_delay = t.value("check_delay", spec.thresholds.check_delay);
    spec.thresholds.delay_lower_factor =
        t.value("delay_lower_factor", spec.thresholds.delay_lower_factor);
  }
  return spec;
}

namespace {
std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

ScenarioSpec load_scenario(const std::string& path) {
  try {
    return scenario_from_json_text(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

SweepSpec load_sweep(const std::string& path) {
  try {
    return sweep_from_json_text(read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace wlanagg
