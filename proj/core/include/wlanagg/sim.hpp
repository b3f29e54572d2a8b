#ifndef WLANAGG_SIM_HPP
#define WLANAGG_SIM_HPP

#include <cstdint>
#include <vector>

#include "wlanagg/phy.hpp"

namespace wlanagg {

// How the paced sender schedules packet k.
//
// Anchored: t_k = k*delta + v_k with v_k i.i.d. uniform on (-J/2, +J/2).
//   Send instants stay locked to the pacing clock, timing errors do not
//   accumulate, and consecutive gaps stay within [delta - J, delta + J].
//   This is how timer-driven pacers behave and is the default.
// Renewal: t_k = t_{k-1} + delta + u_k with u_k i.i.d. uniform on (-J, +J).
//   Gaps are uniform on [delta - J, delta + J] but the error is a random
//   walk, which inflates per-frame packet-count variance at high
//   aggregation. Kept as an option for studying that effect.
enum class PacingModel { Anchored, Renewal };

struct StationProfile {
  double send_rate_pps = 0.0;       // x_i, packets/second
  double jitter_half_width = 6e-6;  // J, seconds; must be < 1/x_i
  double phy_rate_bps = 0.0;        // mean PHY rate when rate_process empty
  std::vector<double> rate_process; // optional per-round rates, cycled

  double rate_for_round(std::size_t round) const {
    return rate_process.empty() ? phy_rate_bps
                                : rate_process[round % rate_process.size()];
  }
};

// Per-frame MAC overhead: fixed part plus a backoff drawn uniformly from
// {0, ..., cw_min-1} slots.
struct OverheadSpec {
  double fixed = 0.0;      // seconds
  double slot = 9e-6;      // seconds per slot
  int cw_min = 16;

  double mean_backoff() const { return 0.5 * (cw_min - 1) * slot; }
  double mean() const { return fixed + mean_backoff(); }
};

// Splits the channel's aggregate per-round overhead c evenly over stations:
// fixed = c/n - mean backoff. Throws std::invalid_argument when c is too
// small to cover the mean backoff.
OverheadSpec derive_overhead(const ChannelParams& channel);

struct SimConfig {
  ChannelParams channel;
  std::vector<StationProfile> stations;
  OverheadSpec per_frame_overhead;   // use derive_overhead() unless set
  std::size_t rounds = 20000;        // round count; 0 = use max_seconds
  double max_seconds = 0.0;          // optional horizon in simulated time
  double warmup_fraction = 0.1;
  std::uint64_t seed = 1;
  PacingModel pacing = PacingModel::Anchored;
  bool record_packets = true;

  void validate() const;  // throws std::invalid_argument
};

struct FrameRecord {
  double service_start = 0.0;  // end of the previous frame
  double tx_start = 0.0;       // dequeue instant (payload start)
  double overhead = 0.0;       // fixed + backoff for this frame
  double airtime = 0.0;        // overhead + payload, excludes idle waiting
  std::int32_t n_packets = 0;
  std::int32_t queue_after = 0;
  bool blocked = false;        // queue was empty, waited for an arrival
};

struct PacketRecord {
  std::int32_t station = 0;
  double arrival = 0.0;
  double departure = 0.0;  // end of the frame that carried it
};

// Full event history of one run. Frames are stored row-major,
// rounds x n_stations, in service order.
struct SimTrace {
  SimConfig config;
  std::vector<double> round_start;
  std::vector<FrameRecord> frames;
  std::vector<PacketRecord> packets;

  std::size_t n_stations() const { return config.stations.size(); }
  std::size_t rounds() const {
    return n_stations() ? frames.size() / n_stations() : 0;
  }
  const FrameRecord& frame(std::size_t round, std::size_t station) const {
    return frames[round * n_stations() + station];
  }
};

struct StationStats {
  double mean_agg = 0.0;
  double std_agg = 0.0;
  double mean_delay = 0.0;      // NaN when packets were not recorded
  double p95_delay = 0.0;       // NaN when packets were not recorded
  double throughput_pps = 0.0;
  double mean_airtime = 0.0;
  std::size_t frames = 0;
  std::size_t blocked_frames = 0;
  std::size_t packets = 0;
};

struct SimStats {
  std::vector<StationStats> station;
  double mean_round = 0.0;
  std::size_t rounds_used = 0;   // post-warmup rounds
  std::size_t blocked_total = 0; // scenario below the model's envelope if > 0
};

// Paced arrival instants for one station over [0, horizon).
// Deterministic per seed; matches the stream a simulation run consumes for
// that station when seeded with station_seed(run_seed, index).
std::vector<double> generate_arrivals(const StationProfile& profile,
                                      double horizon, std::uint64_t seed,
                                      PacingModel pacing = PacingModel::Anchored);

// Per-station RNG stream derivation used by run().
std::uint64_t station_seed(std::uint64_t run_seed, std::size_t station_index);

// Runs the round-robin downlink simulation: per round, stations are
// serviced in index order; each frame waits its overhead, dequeues up to
// n_max packets at the transmission instant, and occupies the channel for
// overhead + (l + l_oh) * m / R seconds. An empty queue blocks the round
// until the station's next arrival (one-packet frame), keeping the
// at-least-one-frame-per-round service discipline observable.
SimTrace run(const SimConfig& config);

// Post-warmup summary statistics. Throws std::invalid_argument if the
// trace is empty or warmup leaves no rounds.
SimStats collect_stats(const SimTrace& trace, double warmup_fraction);

// Columnar trace serialization, one file per record kind.
// rounds CSV:  round,station,service_start,tx_start,overhead,airtime,
//              n_packets,queue_after,blocked
// packets CSV: station,arrival,departure
// Numbers are shortest-round-trip decimal; identical traces serialize to
// identical bytes.
std::string rounds_csv(const SimTrace& trace);
std::string packets_csv(const SimTrace& trace);

}  // namespace wlanagg

#endif  // WLANAGG_SIM_HPP
