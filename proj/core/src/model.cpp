#include "wlanagg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace wlanagg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_inputs(const ChannelParams& params, const RateVector& w,
                  const LoadVector& x) {
  params.validate();
  if (w.size() != static_cast<std::size_t>(params.n_stations) ||
      x.size() != w.size()) {
    throw std::invalid_argument("model: station count mismatch between params, w and x");
  }
  for (double xi : x.x) {
    if (!(xi > 0.0)) throw std::domain_error("model: send rates must be > 0");
  }
  for (double wi : w.w) {
    if (!(wi > 0.0)) throw std::domain_error("model: packet airtimes must be > 0");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Equilibrium of N = (c + w'N) x with elementwise projection onto
// [1, n_max]. Stations pinned at a bound contribute w_i * bound to the
// round time; the free subset is re-solved (active-set style) until the
// pinned set is stable.
std::vector<double> solve_projected(const ChannelParams& params,
                                    const RateVector& w, const LoadVector& x,
                                    double rho, bool* any_clamped) {
  const std::size_t n = x.size();
  const double nmax = params.n_max;
  std::vector<double> nbar(n, nmax);
  if (rho >= 1.0) {
    *any_clamped = true;
    return nbar;
  }

  // 0 = free, +1 pinned at n_max, -1 pinned at 1
  std::vector<int> pin(n, 0);
  const int max_passes = 2 * static_cast<int>(n) + 2;
  for (int pass = 0; pass < max_passes; ++pass) {
    double c_eff = params.overhead_c;
    double rho_free = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pin[i] > 0) c_eff += w.w[i] * nmax;
      else if (pin[i] < 0) c_eff += w.w[i];
      else rho_free += w.w[i] * x.x[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      nbar[i] = pin[i] > 0 ? nmax
              : pin[i] < 0 ? 1.0
                           : c_eff * x.x[i] / (1.0 - rho_free);
    }
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (pin[i] == 0) {
        const int want = nbar[i] >= nmax ? 1 : nbar[i] <= 1.0 ? -1 : 0;
        if (want != 0) {
          pin[i] = want;
          changed = true;
        }
      } else {
        // Release a pinned station if, freed against the current solution,
        // it would land strictly inside the interval.
        const double bound = pin[i] > 0 ? nmax : 1.0;
        const double c_freed = c_eff - w.w[i] * bound;
        const double rho_freed = rho_free + w.w[i] * x.x[i];
        if (rho_freed < 1.0) {
          const double cand = c_freed * x.x[i] / (1.0 - rho_freed);
          if (cand > 1.0 && cand < nmax) {
            pin[i] = 0;
            changed = true;
          }
        }
      }
    }
    if (!changed) break;
  }
  *any_clamped = std::any_of(pin.begin(), pin.end(), [](int p) { return p != 0; });
  for (std::size_t i = 0; i < n; ++i) nbar[i] = std::clamp(nbar[i], 1.0, nmax);
  return nbar;
}

std::vector<double> raw_fixed_point(const ChannelParams& params,
                                    const RateVector& w, const LoadVector& x,
                                    double rho) {
  std::vector<double> f(x.size(), kNaN);
  if (rho < 1.0) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      f[i] = params.overhead_c * x.x[i] / (1.0 - rho);
    }
  }
  return f;
}

}  // namespace

LoadVector LoadVector::from_rates(std::span<const double> rates_pps) {
  return LoadVector{{rates_pps.begin(), rates_pps.end()}};
}

LoadVector LoadVector::from_mbps(std::span<const double> mbps,
                                 const ChannelParams& params) {
  LoadVector lv;
  lv.x.reserve(mbps.size());
  for (double m : mbps) lv.x.push_back(m * 1e6 / params.packet_len_bits);
  return lv;
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Saturated: return "saturated";
    case Regime::Linear: return "linear";
    case Regime::Transition: return "transition";
  }
  return "?";
}

std::vector<Regime> classify_regime(const ChannelParams& params,
                                    const RateVector& w, const LoadVector& x) {
  check_inputs(params, w, x);
  const std::size_t n = x.size();
  const double rho = dot(w.w, x.x);
  std::vector<Regime> out(n, Regime::Saturated);
  if (rho >= 1.0) return out;

  const std::vector<double> f = raw_fixed_point(params, w, x, rho);
  const double sig_c = params.overhead_sigma();
  const double amp = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    const double sigma = x.x[i] * sig_c / amp;
    if (f[i] >= params.n_max) {
      out[i] = Regime::Saturated;
    } else if (f[i] + 2.0 * sigma >= params.n_max) {
      out[i] = Regime::Transition;
    } else {
      out[i] = Regime::Linear;
    }
  }
  return out;
}

double mean_round_duration(const ChannelParams& params, const RateVector& w,
                           std::span<const double> n_bar) {
  params.validate();
  if (w.size() != n_bar.size()) {
    throw std::invalid_argument("mean_round_duration: size mismatch");
  }
  return params.overhead_c + dot(w.w, n_bar);
}

std::vector<double> delay_bound(const ChannelParams& params,
                                const RateVector& w, const LoadVector& x) {
  check_inputs(params, w, x);
  const double rho = dot(w.w, x.x);
  const double linear_term = rho < 1.0
      ? params.overhead_c / (1.0 - rho)
      : std::numeric_limits<double>::infinity();
  std::vector<double> bound(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    bound[i] = std::max(std::min(linear_term, params.n_max / x.x[i]),
                        1.0 / x.x[i]);
  }
  return bound;
}

std::vector<double> fluctuation_std(const ChannelParams& params,
                                    const RateVector& w, const LoadVector& x) {
  check_inputs(params, w, x);
  const double rho = dot(w.w, x.x);
  if (rho >= 1.0) {
    throw std::domain_error("fluctuation_std: no stationary distribution for rho >= 1");
  }
  const double sig_c = params.overhead_sigma();
  const double amp = std::sqrt(1.0 - rho * rho);
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x.x[i] * sig_c / amp;
  return out;
}

FluctuationTrace simulate_fluctuations(const ChannelParams& params,
                                       const RateVector& w,
                                       const LoadVector& x,
                                       std::size_t rounds, std::uint64_t seed,
                                       double initial_scale) {
  check_inputs(params, w, x);
  if (rounds == 0) throw std::invalid_argument("simulate_fluctuations: rounds must be >= 1");
  const double rho = dot(w.w, x.x);
  if (rho >= 1.0) {
    throw std::domain_error("simulate_fluctuations: unstable for rho >= 1");
  }

  const std::size_t n = x.size();
  const double half_width = params.backoff_width() / 2.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> backoff(-half_width, half_width);

  FluctuationTrace trace;
  trace.n_stations = n;
  trace.eta.resize(rounds * n);

  // Reduced-order form: with u = w'eta the recursion is
  //   u_{f+1} = rho * (u_f + zeta_f),  eta_{f+1} = (u_f + zeta_f) * x
  // where zeta_f = C_f - c is the centered overhead noise.
  double u = initial_scale;
  for (std::size_t f = 0; f < rounds; ++f) {
    double zeta = 0.0;
    for (std::size_t j = 0; j < n; ++j) zeta += backoff(rng);
    const double s = u + zeta;
    for (std::size_t i = 0; i < n; ++i) trace.eta[f * n + i] = s * x.x[i];
    u = rho * s;
  }
  return trace;
}

double time_constant(const ChannelParams& params, const RateVector& w,
                     const LoadVector& x) {
  check_inputs(params, w, x);
  const double rho = dot(w.w, x.x);
  if (!(rho > 0.0) || rho >= 1.0) {
    throw std::domain_error("time_constant: defined only for 0 < rho < 1");
  }
  const double mean_round = params.overhead_c / (1.0 - rho);
  return mean_round / std::abs(std::log(rho));
}

ModelResult mean_aggregation(const ChannelParams& params, const RateVector& w,
                             const LoadVector& x) {
  check_inputs(params, w, x);
  const std::size_t n = x.size();

  ModelResult r;
  r.rho = dot(w.w, x.x);
  r.n_bar_unclamped = raw_fixed_point(params, w, x, r.rho);
  r.n_bar = solve_projected(params, w, x, r.rho, &r.any_clamped);
  r.regime = classify_regime(params, w, x);
  r.mean_round = mean_round_duration(params, w, r.n_bar);
  r.delay_bound = delay_bound(params, w, x);

  if (r.rho < 1.0) {
    r.fluct_std = fluctuation_std(params, w, x);
    r.tau = r.rho > 0.0 ? time_constant(params, w, x) : kNaN;
  } else {
    r.fluct_std.assign(n, kNaN);
    r.tau = kNaN;
  }
  return r;
}

DelayTargetPoint rate_for_delay_target(const ChannelParams& params,
                                       const RateVector& w,
                                       double target_delay) {
  params.validate();
  if (w.size() != static_cast<std::size_t>(params.n_stations)) {
    throw std::invalid_argument("rate_for_delay_target: station count mismatch");
  }
  for (double wi : w.w) {
    if (std::abs(wi - w.w[0]) > 1e-15 * w.w[0]) {
      throw std::invalid_argument("rate_for_delay_target: stations must be symmetric");
    }
  }
  if (!(target_delay > params.overhead_c)) {
    throw std::domain_error("rate_for_delay_target: target delay is infeasible, "
                            "overhead alone exceeds it");
  }

  const double n = params.n_stations;
  const double wi = w.w[0];
  // Unclamped: delay c/(1 - n w x) = T  =>  x = (1 - c/T) / (n w).
  const double x_raw = (1.0 - params.overhead_c / target_delay) / (n * wi);
  double agg = x_raw * target_delay;
  double x = x_raw;
  if (agg > params.n_max || agg < 1.0) {
    agg = std::clamp(agg, 1.0, static_cast<double>(params.n_max));
    // Keep the load consistent with the projected aggregation level:
    // N = x * (c + n w N)  =>  x = N / (c + n w N).
    x = agg / (params.overhead_c + n * wi * agg);
  }
  DelayTargetPoint pt;
  pt.load.x.assign(params.n_stations, x);
  pt.aggregation = agg;
  return pt;
}

}  // namespace wlanagg
