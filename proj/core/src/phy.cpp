#include "wlanagg/phy.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace wlanagg {

namespace {

// VHT modulation/coding per MCS index: coded bits per subcarrier per
// stream and coding rate.
struct McsDef {
  int bpscs;
  int coding_num;
  int coding_den;
};

constexpr McsDef kVhtMcs[10] = {
    {1, 1, 2},  // MCS0  BPSK 1/2
    {2, 1, 2},  // MCS1  QPSK 1/2
    {2, 3, 4},  // MCS2  QPSK 3/4
    {4, 1, 2},  // MCS3  16-QAM 1/2
    {4, 3, 4},  // MCS4  16-QAM 3/4
    {6, 2, 3},  // MCS5  64-QAM 2/3
    {6, 3, 4},  // MCS6  64-QAM 3/4
    {6, 5, 6},  // MCS7  64-QAM 5/6
    {8, 3, 4},  // MCS8  256-QAM 3/4
    {8, 5, 6},  // MCS9  256-QAM 5/6
};

constexpr int kDataSubcarriers80 = 234;

double symbol_time(GuardInterval gi) {
  return gi == GuardInterval::Long ? 4.0e-6 : 3.6e-6;
}

// Single-stream rate; the nss multiple is applied afterwards so the linear
// scaling property holds exactly in floating point.
double per_stream_rate(int mcs, GuardInterval gi) {
  const McsDef& def = kVhtMcs[mcs];
  return kDataSubcarriers80 * def.bpscs *
         (static_cast<double>(def.coding_num) / def.coding_den) /
         symbol_time(gi);
}

}  // namespace

double phy_rate(const McsConfig& cfg) {
  if (cfg.channel_width_mhz != 80) {
    throw std::invalid_argument("phy_rate: only 80MHz channels supported, got " +
                                std::to_string(cfg.channel_width_mhz) + "MHz");
  }
  if (cfg.mcs_index < 0 || cfg.mcs_index > 9) {
    throw std::invalid_argument("phy_rate: mcs_index out of range [0,9]: " +
                                std::to_string(cfg.mcs_index));
  }
  if (cfg.nss < 1 || cfg.nss > 3) {
    throw std::invalid_argument("phy_rate: nss out of range [1,3]: " +
                                std::to_string(cfg.nss));
  }
  return cfg.nss * per_stream_rate(cfg.mcs_index, cfg.gi);
}

const std::vector<VhtRateEntry>& vht80_rate_table() {
  static const std::vector<VhtRateEntry> table = [] {
    std::vector<VhtRateEntry> t;
    for (int nss = 1; nss <= 3; ++nss) {
      for (int mcs = 0; mcs <= 9; ++mcs) {
        for (GuardInterval gi : {GuardInterval::Long, GuardInterval::Short}) {
          t.push_back({mcs, nss, gi, phy_rate({mcs, nss, 80, gi})});
        }
      }
    }
    return t;
  }();
  return table;
}

std::string vht80_rate_table_csv() {
  std::string out = "mcs,nss,gi,rate_mbps\n";
  char line[64];
  for (const VhtRateEntry& e : vht80_rate_table()) {
    // Half-up to one decimal, the rounding used by published rate tables
    // (29.25 -> 29.3).
    const double mbps = std::floor(e.rate_bps / 1e5 + 0.5) / 10.0;
    std::snprintf(line, sizeof line, "%d,%d,%s,%.1f\n", e.mcs_index, e.nss,
                  e.gi == GuardInterval::Long ? "long" : "short", mbps);
    out += line;
  }
  return out;
}

double harmonic_mean_rate(std::span<const double> rate_samples_bps) {
  if (rate_samples_bps.empty()) {
    throw std::domain_error("harmonic_mean_rate: empty sample list");
  }
  double inv_sum = 0.0;
  for (double r : rate_samples_bps) {
    if (!(r > 0.0)) {
      throw std::domain_error("harmonic_mean_rate: non-positive rate sample");
    }
    inv_sum += 1.0 / r;
  }
  return rate_samples_bps.size() / inv_sum;
}

double ChannelParams::overhead_sigma() const {
  return std::sqrt(static_cast<double>(n_stations)) * backoff_width() /
         std::sqrt(12.0);
}

void ChannelParams::validate() const {
  if (!(overhead_c > 0)) throw std::invalid_argument("overhead_c must be > 0");
  if (n_stations < 1) throw std::invalid_argument("n_stations must be >= 1");
  if (!(packet_len_bits > 0)) throw std::invalid_argument("packet_len_bits must be > 0");
  if (mac_overhead_bits < 0) throw std::invalid_argument("mac_overhead_bits must be >= 0");
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (!(backoff_slot >= 0)) throw std::invalid_argument("backoff_slot must be >= 0");
  if (cw_min < 1) throw std::invalid_argument("cw_min must be >= 1");
}

double default_round_overhead(int n_stations) {
  if (n_stations < 1) {
    throw std::invalid_argument("default_round_overhead: n_stations must be >= 1");
  }
  return 220e-6 + 50e-6 * n_stations;
}

RateVector build_rate_vector(const ChannelParams& params,
                             std::span<const double> mean_rates_bps) {
  params.validate();
  if (static_cast<int>(mean_rates_bps.size()) != params.n_stations) {
    throw std::invalid_argument("build_rate_vector: expected one rate per station");
  }
  const double bits_per_packet = params.packet_len_bits + params.mac_overhead_bits;
  RateVector rv;
  rv.w.reserve(mean_rates_bps.size());
  rv.r_bar.assign(mean_rates_bps.begin(), mean_rates_bps.end());
  for (double r : mean_rates_bps) {
    if (!(r > 0.0)) {
      throw std::domain_error("build_rate_vector: non-positive PHY rate");
    }
    rv.w.push_back(bits_per_packet / r);
  }
  return rv;
}

RateVector build_rate_vector(const ChannelParams& params,
                             std::span<const McsConfig> station_cfgs) {
  std::vector<double> rates;
  rates.reserve(station_cfgs.size());
  for (const McsConfig& cfg : station_cfgs) rates.push_back(phy_rate(cfg));
  return build_rate_vector(params, rates);
}

}  // namespace wlanagg
