#include <benchmark/benchmark.h>

#include "wlanagg/model.hpp"
#include "wlanagg/sim.hpp"

namespace {

using namespace wlanagg;

ChannelParams make_channel(int n) {
  ChannelParams ch;
  ch.n_stations = n;
  ch.overhead_c = default_round_overhead(n);
  return ch;
}

void BM_MeanAggregation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  ChannelParams ch = make_channel(n);
  std::vector<double> rates(n, 780e6);
  RateVector w = build_rate_vector(ch, rates);
  LoadVector x;
  x.x.assign(n, 0.8 / (n * w.w[0]));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mean_aggregation(ch, w, x));
  }
}
BENCHMARK(BM_MeanAggregation)->Arg(1)->Arg(4)->Arg(20);

void BM_FluctuationRollout(benchmark::State& state) {
  ChannelParams ch = make_channel(1);
  const double rates[] = {585e6};
  RateVector w = build_rate_vector(ch, rates);
  LoadVector x{{8333.0}};
  const std::size_t rounds = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_fluctuations(ch, w, x, rounds, 7));
  }
  state.SetItemsProcessed(state.iterations() * rounds);
}
BENCHMARK(BM_FluctuationRollout)->Arg(10000)->Arg(100000);

void BM_SimulatorRounds(benchmark::State& state) {
  SimConfig cfg;
  cfg.channel = make_channel(2);
  StationProfile p;
  p.send_rate_pps = 20000.0;
  p.phy_rate_bps = 780e6;
  cfg.stations = {p, p};
  cfg.per_frame_overhead = derive_overhead(cfg.channel);
  cfg.rounds = static_cast<std::size_t>(state.range(0));
  cfg.record_packets = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(cfg));
  }
  state.SetItemsProcessed(state.iterations() * cfg.rounds);
}
BENCHMARK(BM_SimulatorRounds)->Arg(2000)->Arg(20000);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
