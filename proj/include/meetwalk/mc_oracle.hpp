#ifndef MEETWALK_MC_ORACLE_HPP
#define MEETWALK_MC_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <span>

#include "meetwalk/matrices.hpp"

namespace meetwalk {

/// Monte Carlo estimate of a meeting time. Censored trials (those that hit
/// the horizon) are excluded from the mean; when any trial is censored the
/// mean is only a lower bound.
struct SimulationEstimate {
  std::optional<double> mean;  // nullopt when every trial is censored
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t censored = 0;
  double horizon = 0.0;

  bool lower_bound_only() const { return censored > 0; }
};

struct SimulationOptions {
  std::uint64_t trials = 100000;
  /// Steps (discrete) or time units (continuous). Defaults: 1e6 steps, or the
  /// time in which 1e6 jumps occur at the largest joint exit rate.
  std::optional<double> horizon;
  std::uint64_t seed = 1;
  /// 0 = hardware concurrency. Results do not depend on the thread count.
  unsigned threads = 0;
};

/// Synchronous walkers; a trial stops at the first t >= 1 at which some
/// pursuer and some evader share a node. `start` is 0-based, pursuers first.
SimulationEstimate simulate_dtmc(std::span<const TransitionMatrix> pursuers, std::span<const TransitionMatrix> evaders,
                                 std::span<const int> start, const SimulationOptions& options = {});

/// Event-driven (Gillespie direct method) simulation of independent
/// continuous-time walkers; a co-located start ends at time 0.
SimulationEstimate simulate_ctmc(std::span<const RateMatrix> pursuers, std::span<const RateMatrix> evaders,
                                 std::span<const int> start, const SimulationOptions& options = {});

}  // namespace meetwalk

#endif  // MEETWALK_MC_ORACLE_HPP
