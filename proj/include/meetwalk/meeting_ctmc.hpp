#ifndef MEETWALK_MEETING_CTMC_HPP
#define MEETWALK_MEETING_CTMC_HPP

#include <optional>
#include <span>
#include <vector>

#include "meetwalk/matrices.hpp"
#include "meetwalk/meeting_result.hpp"

namespace meetwalk {

// Continuous-time meeting is a hitting time of the meeting set under the
// joint generator, so co-located starts have meeting time exactly 0. This
// differs from the discrete-time convention, which counts from t = 1.

/// Solves (E(I - Q_joint) - I) m = E 1 with Q_joint = Qp (x) I + I (x) Qe.
MeetingTimeResult ctmc_meeting_times(const RateMatrix& pursuer, const RateMatrix& evader,
                                     const SolverOptions& options = {});

/// Group version with the Kronecker-sum generator of all L + M agents.
MeetingTimeResult ctmc_group_meeting_times(std::span<const RateMatrix> pursuers, std::span<const RateMatrix> evaders,
                                           const SolverOptions& options = {});

/// Expected time for a single chain to enter `targets` (0-based) from each
/// node; nullopt where the targets cannot be reached with probability one.
std::vector<std::optional<double>> ctmc_hitting_times(const RateMatrix& matrix, std::span<const int> targets);

}  // namespace meetwalk

#endif  // MEETWALK_MEETING_CTMC_HPP
