#include "wlanagg/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace wlanagg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Lazy paced arrival stream. next() yields strictly increasing instants.
class ArrivalStream {
 public:
  ArrivalStream(const StationProfile& profile, std::uint64_t seed,
                PacingModel pacing)
      : delta_(1.0 / profile.send_rate_pps),
        half_(profile.jitter_half_width),
        pacing_(pacing),
        rng_(seed),
        jitter_(pacing == PacingModel::Anchored
                    ? std::uniform_real_distribution<double>(-half_ / 2, half_ / 2)
                    : std::uniform_real_distribution<double>(-half_, half_)) {}

  double next() {
    ++k_;
    if (half_ == 0.0) {
      prev_ = k_ * delta_;
    } else if (pacing_ == PacingModel::Anchored) {
      prev_ = k_ * delta_ + jitter_(rng_);
    } else {
      prev_ += delta_ + jitter_(rng_);
    }
    return prev_;
  }

 private:
  double delta_;
  double half_;
  PacingModel pacing_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> jitter_;
  std::uint64_t k_ = 0;
  double prev_ = 0.0;
};

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

void append_int(std::string& out, long long v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? kNaN : s / v.size();
}

}  // namespace

OverheadSpec derive_overhead(const ChannelParams& channel) {
  channel.validate();
  OverheadSpec spec;
  spec.slot = channel.backoff_slot;
  spec.cw_min = channel.cw_min;
  spec.fixed = channel.overhead_c / channel.n_stations - spec.mean_backoff();
  if (spec.fixed < 0.0) {
    throw std::invalid_argument(
        "derive_overhead: per-frame overhead c/n is smaller than the mean "
        "backoff; raise overhead_c or lower cw_min");
  }
  return spec;
}

void SimConfig::validate() const {
  channel.validate();
  if (stations.empty() ||
      stations.size() != static_cast<std::size_t>(channel.n_stations)) {
    throw std::invalid_argument("SimConfig: stations must match channel.n_stations");
  }
  for (const StationProfile& s : stations) {
    if (!(s.send_rate_pps > 0.0)) {
      throw std::invalid_argument("SimConfig: send_rate_pps must be > 0");
    }
    if (s.jitter_half_width < 0.0 ||
        s.jitter_half_width >= 1.0 / s.send_rate_pps) {
      throw std::invalid_argument(
          "SimConfig: jitter half-width must satisfy 0 <= J < 1/x");
    }
    if (s.rate_process.empty() && !(s.phy_rate_bps > 0.0)) {
      throw std::invalid_argument("SimConfig: station needs a PHY rate");
    }
    for (double r : s.rate_process) {
      if (!(r > 0.0)) throw std::invalid_argument("SimConfig: rate_process entries must be > 0");
    }
  }
  if (per_frame_overhead.fixed < 0.0) {
    throw std::invalid_argument("SimConfig: negative fixed overhead");
  }
  if (per_frame_overhead.cw_min < 1 || per_frame_overhead.slot < 0.0) {
    throw std::invalid_argument("SimConfig: bad backoff spec");
  }
  if (rounds == 0 && !(max_seconds > 0.0)) {
    throw std::invalid_argument("SimConfig: need rounds > 0 or max_seconds > 0");
  }
  if (warmup_fraction < 0.0 || warmup_fraction >= 1.0) {
    throw std::invalid_argument("SimConfig: warmup_fraction must be in [0, 1)");
  }
}

std::uint64_t station_seed(std::uint64_t run_seed, std::size_t station_index) {
  return splitmix64(run_seed + 0x100 + station_index);
}

std::vector<double> generate_arrivals(const StationProfile& profile,
                                      double horizon, std::uint64_t seed,
                                      PacingModel pacing) {
  if (!(horizon > 0.0)) throw std::invalid_argument("generate_arrivals: horizon must be > 0");
  if (!(profile.send_rate_pps > 0.0)) {
    throw std::invalid_argument("generate_arrivals: send rate must be > 0");
  }
  if (profile.jitter_half_width < 0.0 ||
      profile.jitter_half_width >= 1.0 / profile.send_rate_pps) {
    throw std::invalid_argument("generate_arrivals: need 0 <= J < 1/x");
  }
  ArrivalStream stream(profile, seed, pacing);
  std::vector<double> arrivals;
  arrivals.reserve(static_cast<std::size_t>(horizon * profile.send_rate_pps) + 16);
  // Inclusive horizon: with J=0 and x packets/s, [0, k/x] holds exactly k
  // arrivals.
  for (double t = stream.next(); t <= horizon; t = stream.next()) {
    arrivals.push_back(t);
  }
  return arrivals;
}

SimTrace run(const SimConfig& config) {
  config.validate();
  const std::size_t n = config.stations.size();
  const ChannelParams& ch = config.channel;
  const double bits_per_packet = ch.packet_len_bits + ch.mac_overhead_bits;

  std::vector<ArrivalStream> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    streams.emplace_back(config.stations[i], station_seed(config.seed, i),
                         config.pacing);
  }
  // One backoff stream consumed in (round, station) order keeps backoffs
  // independent of the arrival processes.
  std::mt19937_64 backoff_rng(splitmix64(config.seed));
  std::uniform_int_distribution<int> backoff_slots(0, config.per_frame_overhead.cw_min - 1);

  std::vector<std::deque<double>> queues(n);   // arrival instants, FIFO
  std::vector<double> pending(n);              // next not-yet-queued arrival
  for (std::size_t i = 0; i < n; ++i) pending[i] = streams[i].next();

  auto ingest_until = [&](std::size_t i, double t) {
    while (pending[i] <= t) {
      queues[i].push_back(pending[i]);
      pending[i] = streams[i].next();
    }
  };

  SimTrace trace;
  trace.config = config;
  if (config.rounds > 0) {
    trace.round_start.reserve(config.rounds);
    trace.frames.reserve(config.rounds * n);
  }

  double now = 0.0;
  for (std::size_t f = 0; config.rounds ? f < config.rounds : now < config.max_seconds; ++f) {
    trace.round_start.push_back(now);
    for (std::size_t i = 0; i < n; ++i) {
      FrameRecord rec;
      rec.service_start = now;
      rec.overhead = config.per_frame_overhead.fixed +
                     backoff_slots(backoff_rng) * config.per_frame_overhead.slot;
      double tx = now + rec.overhead;
      ingest_until(i, tx);
      if (queues[i].empty()) {
        // Below the model's envelope: block until the next arrival.
        tx = pending[i];
        ingest_until(i, tx);
        rec.blocked = true;
      }
      rec.tx_start = tx;
      const int m = static_cast<int>(
          std::min<std::size_t>(queues[i].size(), static_cast<std::size_t>(ch.n_max)));
      const double payload = bits_per_packet * m / config.stations[i].rate_for_round(f);
      const double end = tx + payload;
      rec.airtime = rec.overhead + payload;
      rec.n_packets = m;
      if (config.record_packets) {
        for (int k = 0; k < m; ++k) {
          trace.packets.push_back({static_cast<std::int32_t>(i), queues[i][k], end});
        }
      }
      queues[i].erase(queues[i].begin(), queues[i].begin() + m);
      rec.queue_after = static_cast<std::int32_t>(queues[i].size());
      trace.frames.push_back(rec);
      now = end;
    }
  }
  return trace;
}

SimStats collect_stats(const SimTrace& trace, double warmup_fraction) {
  if (warmup_fraction < 0.0 || warmup_fraction >= 1.0) {
    throw std::invalid_argument("collect_stats: warmup_fraction must be in [0, 1)");
  }
  const std::size_t n = trace.n_stations();
  const std::size_t rounds = trace.rounds();
  if (n == 0 || rounds == 0) throw std::invalid_argument("collect_stats: empty trace");
  const std::size_t first = static_cast<std::size_t>(
      std::floor(warmup_fraction * static_cast<double>(rounds)));
  if (first >= rounds) throw std::invalid_argument("collect_stats: all rounds in warmup");

  const double t_start = trace.round_start[first];
  const double t_end = trace.frames.back().tx_start +
                       (trace.frames.back().airtime - trace.frames.back().overhead);
  const double span = t_end - t_start;

  SimStats stats;
  stats.rounds_used = rounds - first;
  stats.mean_round = span / static_cast<double>(stats.rounds_used);
  stats.station.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    StationStats& st = stats.station[i];
    double sum = 0.0, sum2 = 0.0, air = 0.0;
    for (std::size_t f = first; f < rounds; ++f) {
      const FrameRecord& fr = trace.frame(f, i);
      sum += fr.n_packets;
      sum2 += static_cast<double>(fr.n_packets) * fr.n_packets;
      air += fr.airtime;
      if (fr.blocked) ++st.blocked_frames;
    }
    st.frames = rounds - first;
    st.mean_agg = sum / st.frames;
    st.std_agg = std::sqrt(std::max(0.0, sum2 / st.frames - st.mean_agg * st.mean_agg));
    st.mean_airtime = air / st.frames;
    stats.blocked_total += st.blocked_frames;
  }

  if (trace.config.record_packets) {
    std::vector<std::vector<double>> delays(n);
    for (const PacketRecord& p : trace.packets) {
      if (p.departure >= t_start) {
        delays[p.station].push_back(p.departure - p.arrival);
        ++stats.station[p.station].packets;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      StationStats& st = stats.station[i];
      st.mean_delay = mean_of(delays[i]);
      if (!delays[i].empty()) {
        auto& d = delays[i];
        const std::size_t idx = std::min(d.size() - 1,
            static_cast<std::size_t>(0.95 * static_cast<double>(d.size())));
        std::nth_element(d.begin(), d.begin() + idx, d.end());
        st.p95_delay = d[idx];
      } else {
        st.p95_delay = kNaN;
      }
      st.throughput_pps = st.packets / span;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      stats.station[i].mean_delay = kNaN;
      stats.station[i].p95_delay = kNaN;
      stats.station[i].throughput_pps = kNaN;
    }
  }
  return stats;
}

std::string rounds_csv(const SimTrace& trace) {
  std::string out =
      "round,station,service_start,tx_start,overhead,airtime,n_packets,queue_after,blocked\n";
  const std::size_t n = trace.n_stations();
  for (std::size_t f = 0; f < trace.rounds(); ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      const FrameRecord& fr = trace.frame(f, i);
      append_int(out, static_cast<long long>(f));
      out += ',';
      append_int(out, static_cast<long long>(i));
      out += ',';
      append_double(out, fr.service_start);
      out += ',';
      append_double(out, fr.tx_start);
      out += ',';
      append_double(out, fr.overhead);
      out += ',';
      append_double(out, fr.airtime);
      out += ',';
      append_int(out, fr.n_packets);
      out += ',';
      append_int(out, fr.queue_after);
      out += ',';
      out += fr.blocked ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

std::string packets_csv(const SimTrace& trace) {
  std::string out = "station,arrival,departure\n";
  for (const PacketRecord& p : trace.packets) {
    append_int(out, p.station);
    out += ',';
    append_double(out, p.arrival);
    out += ',';
    append_double(out, p.departure);
    out += '\n';
  }
  return out;
}

}  // namespace wlanagg
