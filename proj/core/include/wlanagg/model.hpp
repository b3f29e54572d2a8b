#ifndef WLANAGG_MODEL_HPP
#define WLANAGG_MODEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "wlanagg/phy.hpp"

namespace wlanagg {

// Per-station paced send rates, packets/second. x[i] = 1/delta[i] where
// delta[i] is the mean inter-arrival time.
struct LoadVector {
  std::vector<double> x;

  static LoadVector from_rates(std::span<const double> rates_pps);
  // Per-station payload bitrate -> packets/s using the packet length.
  static LoadVector from_mbps(std::span<const double> mbps,
                              const ChannelParams& params);
  std::size_t size() const { return x.size(); }
};

// Operating regime of a station queue.
//   Saturated:  the raw mean-aggregation formula is at or past the cap
//               (or the load factor is past 1); the queue is not cleared.
//   Linear:     the queue is cleared by each frame with margin.
//   Transition: within two stationary std of the cap.
enum class Regime { Saturated, Linear, Transition };

const char* regime_name(Regime r);

// Closed-form model outputs for one configuration.
//
// n_bar is the projected mean aggregation (always within [1, n_max]); when
// some stations clamp, the free stations are re-solved with the clamped
// contribution folded into the overhead constant, so the reported vector is
// a consistent equilibrium. n_bar_unclamped is the raw formula
// c*x / (1 - w'x) and is NaN when rho >= 1.
//
// fluct_std and tau are NaN when no stationary distribution exists
// (rho >= 1); tau is also NaN for rho == 0.
struct ModelResult {
  std::vector<double> n_bar;
  std::vector<double> n_bar_unclamped;
  double rho = 0.0;                  // load factor w'x
  std::vector<Regime> regime;
  double mean_round = 0.0;           // c + w'n_bar, seconds
  std::vector<double> delay_bound;   // seconds
  std::vector<double> fluct_std;     // packets
  double tau = 0.0;                  // seconds

  bool any_clamped = false;          // some station hit 1 or n_max
};

// Mean aggregation fixed point with projection onto [1, n_max], plus the
// derived round time, regimes, delay bounds, fluctuation stds and time
// constant.
//
// Throws std::invalid_argument on dimension mismatch, std::domain_error on
// non-positive send rates.
ModelResult mean_aggregation(const ChannelParams& params, const RateVector& w,
                             const LoadVector& x);

// Per-station regime labels. A station is Saturated when the raw formula
// meets the cap (or rho >= 1), Transition when within two stationary std
// of the cap, Linear otherwise.
std::vector<Regime> classify_regime(const ChannelParams& params,
                                    const RateVector& w, const LoadVector& x);

// c + w'n_bar for a given aggregation vector. In the unclamped linear
// regime this equals c / (1 - rho).
double mean_round_duration(const ChannelParams& params, const RateVector& w,
                           std::span<const double> n_bar);

// Upper bound on mean packet delay:
//   max(min(c / (1 - w'x), n_max / x_i), 1 / x_i)
// with the inner term treated as +inf when rho >= 1.
std::vector<double> delay_bound(const ChannelParams& params,
                                const RateVector& w, const LoadVector& x);

// Stationary std of the aggregation-level fluctuations. The fluctuation
// vector obeys eta_{f+1} = x w' eta_f + (C_f - c) x; the rank-one structure
// gives std(eta_i) = x_i * sigma_C / sqrt(1 - rho^2) with sigma_C the std
// of the aggregate per-round overhead.
// Throws std::domain_error when rho >= 1.
std::vector<double> fluctuation_std(const ChannelParams& params,
                                    const RateVector& w, const LoadVector& x);

// Monte Carlo rollout of the fluctuation recursion. Stored row-major,
// rounds x n_stations. The overhead noise is the sum of n independent
// zero-mean uniforms of width backoff_width (the continuous counterpart of
// the per-station backoff).
struct FluctuationTrace {
  std::size_t n_stations = 0;
  std::vector<double> eta;  // rounds * n_stations

  std::size_t rounds() const { return n_stations ? eta.size() / n_stations : 0; }
  double at(std::size_t round, std::size_t station) const {
    return eta[round * n_stations + station];
  }
};

// Deterministic given (inputs, seed). initial_scale seeds the reduced
// scalar state u_0 = w'eta_0 (0 = start at equilibrium); with it the
// unforced response can be observed directly.
// Throws std::domain_error when rho >= 1, std::invalid_argument for
// rounds == 0.
FluctuationTrace simulate_fluctuations(const ChannelParams& params,
                                       const RateVector& w,
                                       const LoadVector& x,
                                       std::size_t rounds, std::uint64_t seed,
                                       double initial_scale = 0.0);

// Time constant of the fluctuation dynamics, E[Omega] / |ln rho| seconds
// with E[Omega] = c / (1 - rho).
// Throws std::domain_error unless 0 < rho < 1.
double time_constant(const ChannelParams& params, const RateVector& w,
                     const LoadVector& x);

// Symmetric-load design helper: the per-station send rate at which the
// delay bound meets target_delay. Aggregation n = x * target is projected
// onto [1, n_max]; when it projects, x is recomputed from
// x = n / (c + n_stations * w * n) so the returned load still produces the
// projected aggregation level.
// Requires equal w_i; throws std::domain_error when target_delay <= c.
struct DelayTargetPoint {
  LoadVector load;
  double aggregation;  // projected packets/frame
};
DelayTargetPoint rate_for_delay_target(const ChannelParams& params,
                                       const RateVector& w,
                                       double target_delay);

}  // namespace wlanagg

#endif  // WLANAGG_MODEL_HPP
