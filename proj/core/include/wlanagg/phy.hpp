#ifndef WLANAGG_PHY_HPP
#define WLANAGG_PHY_HPP

#include <span>
#include <string>
#include <vector>

namespace wlanagg {

// 802.11ac VHT guard interval. Long = 800ns (4.0us symbol), short = 400ns
// (3.6us symbol).
enum class GuardInterval { Long, Short };

// PHY configuration of a single station link. Only 80MHz channels are
// supported; at that width every MCS 0-9 x NSS 1-3 combination is accepted
// and the data rate scales linearly in the number of spatial streams.
struct McsConfig {
  int mcs_index = 9;
  int nss = 1;
  int channel_width_mhz = 80;
  GuardInterval gi = GuardInterval::Long;
};

struct VhtRateEntry {
  int mcs_index;
  int nss;
  GuardInterval gi;
  double rate_bps;
};

// VHT data rate in bits/second for an 80MHz channel.
// Throws std::invalid_argument for unsupported width or out-of-range
// mcs/nss. Exact property: phy_rate(mcs, nss, gi) == nss * phy_rate(mcs, 1, gi).
double phy_rate(const McsConfig& cfg);

// The full embedded table, MCS 0-9 x NSS 1-3 x {long, short} GI at 80MHz.
// The same data ships as core/data/vht80_rates.csv (rates in Mbps, one
// decimal, directly diffable against published standard tables).
const std::vector<VhtRateEntry>& vht80_rate_table();

// Writes the rate table in the documented CSV layout:
//   mcs,nss,gi,rate_mbps\n  with gi in {long,short} and rate_mbps at one
// decimal, rows ordered by (nss, mcs, gi).
std::string vht80_rate_table_csv();

// 1 / mean(1/R). The right average of a fluctuating PHY rate for airtime
// computations; always <= the arithmetic mean.
// Throws std::domain_error on an empty list or non-positive sample.
double harmonic_mean_rate(std::span<const double> rate_samples_bps);

// Per-WLAN constants of the aggregation model.
//
// overhead_c is the mean aggregate per-round time spent on channel access,
// PHY/MAC headers and ACKs, lumped into one scalar. It is a direct
// configuration input; the fitted defaults below come from 802.11ac
// measurements (270us for one station, 320us for two).
struct ChannelParams {
  double overhead_c = 270e-6;      // seconds, E[C_f]
  int n_stations = 1;
  double packet_len_bits = 12000;  // l (1500B payload)
  double mac_overhead_bits = 208;  // l_oh per packet
  int n_max = 64;                  // aggregation cap, packets per frame
  double backoff_slot = 9e-6;      // seconds per MAC slot
  int cw_min = 16;                 // contention window, slots

  // Support width of one station's backoff: (cw_min - 1) * slot, 135us at
  // defaults.
  double backoff_width() const { return (cw_min - 1) * backoff_slot; }
  // Std of the aggregate per-round overhead C_f: n independent backoffs,
  // each modeled as uniform over backoff_width.
  double overhead_sigma() const;

  void validate() const;  // throws std::invalid_argument
};

// Interpolates the fitted per-round overheads (270us @ n=1, 320us @ n=2)
// affinely: 220us + 50us * n. A convenience default only; overhead_c can
// always be set explicitly.
double default_round_overhead(int n_stations);

// Per-station mean packet airtimes. w[i] = (l + l_oh) / r_bar[i] is the
// mean time to transmit one packet to station i.
struct RateVector {
  std::vector<double> w;      // seconds per packet
  std::vector<double> r_bar;  // bits per second

  std::size_t size() const { return w.size(); }
};

// Builds w from explicit mean PHY rates (bits/s), one per station.
// Throws std::domain_error on non-positive rates, std::invalid_argument on
// a station-count mismatch.
RateVector build_rate_vector(const ChannelParams& params,
                             std::span<const double> mean_rates_bps);

// Same, with rates taken from the VHT table.
RateVector build_rate_vector(const ChannelParams& params,
                             std::span<const McsConfig> station_cfgs);

}  // namespace wlanagg

#endif  // WLANAGG_PHY_HPP
