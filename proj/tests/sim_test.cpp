#include "wlanagg/sim.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace wlanagg {
namespace {

StationProfile station(double x, double jitter, double rate) {
  StationProfile p;
  p.send_rate_pps = x;
  p.jitter_half_width = jitter;
  p.phy_rate_bps = rate;
  return p;
}

SimConfig basic_config(double x, double jitter = 6e-6, double rate = 585e6,
                       double c = 270e-6) {
  SimConfig cfg;
  cfg.channel.overhead_c = c;
  cfg.channel.n_stations = 1;
  cfg.stations = {station(x, jitter, rate)};
  cfg.per_frame_overhead = derive_overhead(cfg.channel);
  cfg.rounds = 2000;
  cfg.seed = 7;
  return cfg;
}

TEST(Arrivals, NoJitterIsExactGrid) {
  StationProfile p = station(1000.0, 0.0, 585e6);
  std::vector<double> t = generate_arrivals(p, 1.0, 1);
  ASSERT_EQ(t.size(), 1000u);
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_NEAR(t[k], (k + 1) * 1e-3, 1e-12);
  }
}

TEST(Arrivals, GapsStayWithinJitterSupport) {
  // J=6us on a 120us spacing: every gap within [114us, 126us]
  StationProfile p = station(1.0 / 120e-6, 6e-6, 585e6);
  for (PacingModel pacing : {PacingModel::Anchored, PacingModel::Renewal}) {
    std::vector<double> t = generate_arrivals(p, 0.5, 99, pacing);
    ASSERT_GT(t.size(), 1000u);
    for (std::size_t k = 1; k < t.size(); ++k) {
      const double gap = t[k] - t[k - 1];
      EXPECT_GE(gap, 114e-6 - 1e-12);
      EXPECT_LE(gap, 126e-6 + 1e-12);
    }
  }
}

TEST(Arrivals, DeterministicPerSeed) {
  StationProfile p = station(5000.0, 10e-6, 585e6);
  EXPECT_EQ(generate_arrivals(p, 1.0, 42), generate_arrivals(p, 1.0, 42));
  EXPECT_NE(generate_arrivals(p, 1.0, 42), generate_arrivals(p, 1.0, 43));
}

TEST(Arrivals, EmpiricalMeanMatchesNominalSpacing) {
  const double delta = 120e-6;
  StationProfile p = station(1.0 / delta, 6e-6, 585e6);
  for (PacingModel pacing : {PacingModel::Anchored, PacingModel::Renewal}) {
    std::vector<double> t = generate_arrivals(p, 12.01, 3, pacing);
    ASSERT_GE(t.size(), 100000u);
    const double mean_gap = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    EXPECT_NEAR(mean_gap, delta, 1e-3 * delta);
  }
}

TEST(Arrivals, RejectsJitterAtOrAboveSpacing) {
  StationProfile p = station(1000.0, 1e-3, 585e6);
  EXPECT_THROW(generate_arrivals(p, 1.0, 1), std::invalid_argument);
  p.jitter_half_width = 2e-3;
  EXPECT_THROW(generate_arrivals(p, 1.0, 1), std::invalid_argument);
}

TEST(DeriveOverhead, SplitsRoundOverheadEvenly) {
  ChannelParams ch;
  ch.overhead_c = 270e-6;
  OverheadSpec spec = derive_overhead(ch);
  EXPECT_NEAR(spec.fixed, 270e-6 - 67.5e-6, 1e-15);
  EXPECT_NEAR(spec.mean(), 270e-6, 1e-15);

  ch.n_stations = 2;
  ch.overhead_c = 320e-6;
  spec = derive_overhead(ch);
  EXPECT_NEAR(2 * spec.mean(), 320e-6, 1e-15);

  // c too small to cover the mean backoff
  ch.overhead_c = 60e-6;
  EXPECT_THROW(derive_overhead(ch), std::invalid_argument);
}

// With zero jitter and zero-width backoff the run is deterministic and must
// track the reduced recurrence N <- (c + w N) x within integer quantization.
TEST(Run, DeterministicLoadTracksModel) {
  SimConfig cfg = basic_config(16551.0, 0.0, 1170e6);
  cfg.channel.cw_min = 1;
  cfg.per_frame_overhead = derive_overhead(cfg.channel);
  cfg.rounds = 3000;

  const double w = (cfg.channel.packet_len_bits + cfg.channel.mac_overhead_bits) /
                   cfg.stations[0].phy_rate_bps;
  const double rho = w * cfg.stations[0].send_rate_pps;
  ASSERT_LT(rho, 1.0);
  const double f_star = cfg.channel.overhead_c * cfg.stations[0].send_rate_pps / (1.0 - rho);

  SimTrace trace = run(cfg);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t f = 500; f < trace.rounds(); ++f) {
    const FrameRecord& fr = trace.frame(f, 0);
    EXPECT_FALSE(fr.blocked);
    EXPECT_NEAR(fr.n_packets, f_star, 1.0 / (1.0 - rho) + 1e-9);
    sum += fr.n_packets;
    ++count;
  }
  EXPECT_NEAR(sum / count, f_star, 1.0);
}

TEST(Run, SaturatedLoadPinsAtCapAndQueueGrows) {
  SimConfig cfg = basic_config(60000.0, 6e-6, 780e6);
  cfg.rounds = 3000;
  SimTrace trace = run(cfg);
  for (std::size_t f = trace.rounds() / 2; f < trace.rounds(); ++f) {
    EXPECT_EQ(trace.frame(f, 0).n_packets, 64);
  }
  const int q_mid = trace.frame(trace.rounds() / 2, 0).queue_after;
  const int q_end = trace.frame(trace.rounds() - 1, 0).queue_after;
  EXPECT_GT(q_end, q_mid + 1000);
}

TEST(Run, SymmetricStationsGetSymmetricService) {
  SimConfig cfg;
  cfg.channel.overhead_c = 320e-6;
  cfg.channel.n_stations = 2;
  cfg.stations = {station(20000.0, 6e-6, 780e6), station(20000.0, 6e-6, 780e6)};
  cfg.per_frame_overhead = derive_overhead(cfg.channel);
  cfg.rounds = 20000;
  cfg.seed = 21;
  SimStats stats = collect_stats(run(cfg), 0.1);
  EXPECT_NEAR(stats.station[0].mean_agg, stats.station[1].mean_agg,
              0.02 * stats.station[0].mean_agg);
}

TEST(Run, ConservationAndFifoPerStation) {
  SimConfig cfg;
  cfg.channel.overhead_c = 320e-6;
  cfg.channel.n_stations = 2;
  cfg.stations = {station(15000.0, 6e-6, 780e6), station(5000.0, 3e-6, 390e6)};
  cfg.per_frame_overhead = derive_overhead(cfg.channel);
  cfg.rounds = 2000;
  cfg.seed = 5;
  SimTrace trace = run(cfg);

  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> arr;
    double last_dep = 0.0;
    for (const PacketRecord& p : trace.packets) {
      if (static_cast<std::size_t>(p.station) != i) continue;
      if (!arr.empty()) {
        EXPECT_GT(p.arrival, arr.back());  // unique, FIFO order
      }
      EXPECT_GE(p.departure, last_dep);
      EXPECT_GE(p.departure, p.arrival);
      last_dep = p.departure;
      arr.push_back(p.arrival);
    }
    // every dequeued packet is a prefix of the regenerated arrival stream
    const double last_tx = trace.frame(trace.rounds() - 1, i).tx_start;
    std::vector<double> regen = generate_arrivals(
        cfg.stations[i], last_tx + 100.0 / cfg.stations[i].send_rate_pps,
        station_seed(cfg.seed, i), cfg.pacing);
    ASSERT_GE(regen.size(), arr.size());
    for (std::size_t k = 0; k < arr.size(); ++k) {
      ASSERT_EQ(arr[k], regen[k]) << "station " << i << " packet " << k;
    }
    // arrivals not yet sent at the end == final queue occupancy
    const std::size_t arrived_by_last_tx = static_cast<std::size_t>(
        std::upper_bound(regen.begin(), regen.end(), last_tx) - regen.begin());
    EXPECT_EQ(arrived_by_last_tx - arr.size(),
              static_cast<std::size_t>(trace.frame(trace.rounds() - 1, i).queue_after));
  }
}

// Replays the queue recursion q' = max(q + P - n_max, 0) from the packet
// arrival streams; it must hold at every round.
TEST(Run, QueueRecursionHoldsExactly) {
  SimConfig cfg;
  cfg.channel.overhead_c = 320e-6;
  cfg.channel.n_stations = 2;
  // station 0 runs hot enough to overflow the cap now and then
  cfg.stations = {station(45000.0, 6e-6, 780e6), station(8000.0, 6e-6, 390e6)};
  cfg.per_frame_overhead = derive_overhead(cfg.channel);
  cfg.rounds = 1500;
  cfg.seed = 11;
  SimTrace trace = run(cfg);

  for (std::size_t i = 0; i < 2; ++i) {
    const double horizon =
        trace.frame(trace.rounds() - 1, i).tx_start + 1.0 / cfg.stations[i].send_rate_pps;
    std::vector<double> regen = generate_arrivals(
        cfg.stations[i], horizon, station_seed(cfg.seed, i), cfg.pacing);
    std::size_t idx = 0;
    int q = 0;
    double prev_tx = -1.0;
    for (std::size_t f = 0; f < trace.rounds(); ++f) {
      const FrameRecord& fr = trace.frame(f, i);
      int arrived = 0;
      while (idx < regen.size() && regen[idx] <= fr.tx_start) {
        if (regen[idx] > prev_tx) ++arrived;
        ++idx;
      }
      const int eligible = q + arrived;
      const int expect_n = std::min(eligible, cfg.channel.n_max);
      ASSERT_EQ(fr.n_packets, expect_n) << "station " << i << " round " << f;
      const int q_next = std::max(eligible - cfg.channel.n_max, 0);
      ASSERT_EQ(fr.queue_after, q_next) << "station " << i << " round " << f;
      q = eligible - fr.n_packets;
      prev_tx = fr.tx_start;
    }
  }
}

TEST(Run, EmptyQueueBlocksAndSendsSinglePacket) {
  // F(x) ~ 0.5: arrivals slower than rounds, every frame waits
  SimConfig cfg = basic_config(1781.0);
  cfg.rounds = 4000;
  SimTrace trace = run(cfg);
  SimStats stats = collect_stats(trace, 0.1);
  EXPECT_GT(stats.station[0].blocked_frames, stats.station[0].frames / 2);
  for (std::size_t f = 0; f < trace.rounds(); ++f) {
    EXPECT_GE(trace.frame(f, 0).n_packets, 1);
  }
  EXPECT_NEAR(stats.station[0].mean_agg, 1.0, 0.05);
}

TEST(Run, ThroughputNeverExceedsSendRate) {
  SimConfig cfg;
  cfg.channel.overhead_c = 320e-6;
  cfg.channel.n_stations = 2;
  cfg.stations = {station(20000.0, 6e-6, 780e6), station(20000.0, 6e-6, 780e6)};
  cfg.per_frame_overhead = derive_overhead(cfg.channel);
  cfg.rounds = 10000;
  SimStats stats = collect_stats(run(cfg), 0.1);
  for (const StationStats& st : stats.station) {
    EXPECT_LE(st.throughput_pps, 20000.0 * 1.005);
  }
}

TEST(Run, PerRoundRateProcessIsApplied) {
  SimConfig cfg = basic_config(14000.0, 0.0, 0.0);
  cfg.channel.cw_min = 1;
  cfg.per_frame_overhead = derive_overhead(cfg.channel);
  cfg.stations[0].rate_process = {1170e6, 117e6};
  cfg.rounds = 100;
  SimTrace trace = run(cfg);
  const double bits = cfg.channel.packet_len_bits + cfg.channel.mac_overhead_bits;
  for (std::size_t f = 0; f < trace.rounds(); ++f) {
    const FrameRecord& fr = trace.frame(f, 0);
    const double rate = cfg.stations[0].rate_process[f % 2];
    EXPECT_NEAR(fr.airtime - fr.overhead, bits * fr.n_packets / rate, 1e-12);
  }
}

TEST(CollectStats, HandcraftedTrace) {
  SimTrace trace;
  trace.config.channel.n_stations = 1;
  trace.config.stations = {station(1000.0, 0.0, 585e6)};
  trace.config.record_packets = true;
  const double round_len = 500e-6;
  for (int f = 0; f < 4; ++f) {
    trace.round_start.push_back(f * round_len);
    FrameRecord fr;
    fr.service_start = f * round_len;
    fr.tx_start = fr.service_start + 100e-6;
    fr.overhead = 100e-6;
    fr.airtime = 400e-6;
    fr.n_packets = 5;
    fr.queue_after = 0;
    trace.frames.push_back(fr);
  }
  trace.packets.push_back({0, 0.0, 300e-6});

  SimStats stats = collect_stats(trace, 0.0);
  EXPECT_DOUBLE_EQ(stats.station[0].mean_agg, 5.0);
  EXPECT_DOUBLE_EQ(stats.station[0].std_agg, 0.0);
  EXPECT_DOUBLE_EQ(stats.station[0].mean_delay, 300e-6);
  EXPECT_EQ(stats.rounds_used, 4u);

  EXPECT_THROW(collect_stats(trace, 1.0), std::invalid_argument);
  SimTrace empty;
  EXPECT_THROW(collect_stats(empty, 0.1), std::invalid_argument);
}

TEST(TraceCsv, DeterministicByteIdentical) {
  SimConfig cfg = basic_config(14000.0);
  cfg.rounds = 300;
  SimTrace a = run(cfg);
  SimTrace b = run(cfg);
  EXPECT_EQ(rounds_csv(a), rounds_csv(b));
  EXPECT_EQ(packets_csv(a), packets_csv(b));

  cfg.seed += 1;
  SimTrace c = run(cfg);
  EXPECT_NE(rounds_csv(a), rounds_csv(c));
}

TEST(TraceCsv, Layout) {
  SimConfig cfg = basic_config(14000.0);
  cfg.rounds = 10;
  SimTrace trace = run(cfg);
  const std::string rcsv = rounds_csv(trace);
  EXPECT_EQ(rcsv.substr(0, rcsv.find('\n')),
            "round,station,service_start,tx_start,overhead,airtime,n_packets,"
            "queue_after,blocked");
  EXPECT_EQ(static_cast<std::size_t>(std::count(rcsv.begin(), rcsv.end(), '\n')),
            1 + trace.rounds() * trace.n_stations());
  const std::string pcsv = packets_csv(trace);
  EXPECT_EQ(pcsv.substr(0, pcsv.find('\n')), "station,arrival,departure");
}

TEST(SimConfigTest, Validation) {
  SimConfig cfg = basic_config(1000.0);
  cfg.stations[0].jitter_half_width = 1e-3;  // == spacing
  EXPECT_THROW(cfg.validate(), std::invalid_argument);

  cfg = basic_config(1000.0);
  cfg.rounds = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.max_seconds = 1.0;
  EXPECT_NO_THROW(cfg.validate());

  cfg = basic_config(1000.0);
  cfg.warmup_fraction = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);

  cfg = basic_config(1000.0);
  cfg.stations[0].phy_rate_bps = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(SimConfigTest, DurationInSeconds) {
  SimConfig cfg = basic_config(14000.0);
  cfg.rounds = 0;
  cfg.max_seconds = 0.05;
  SimTrace trace = run(cfg);
  EXPECT_GT(trace.rounds(), 10u);
  EXPECT_GE(trace.round_start.back(), 0.05 - 2e-3);
  EXPECT_LT(trace.round_start.back(), 0.05);
}

}  // namespace
}  // namespace wlanagg
