#ifndef MEETWALK_MEETING_DTMC_HPP
#define MEETWALK_MEETING_DTMC_HPP

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "meetwalk/matrices.hpp"
#include "meetwalk/meeting_result.hpp"

namespace meetwalk {

/// Meeting times of one pursuer and one evader in discrete time.
///
/// Solves (I - (Pp (x) Pe) E) m = 1 where E zeroes the columns of the
/// diagonal states. Start pairs that cannot be guaranteed to meet are marked
/// infinite and the system is solved on the remaining states.
MeetingTimeResult meeting_times(const TransitionMatrix& pursuer, const TransitionMatrix& evader,
                                const SolverOptions& options = {});

/// Meeting time from pursuer node i and evader node j (0-based), using one
/// solve restricted to the states reachable from (i, j). nullopt = infinite.
std::optional<double> meeting_time_pair(const TransitionMatrix& pursuer, const TransitionMatrix& evader, int i,
                                        int j, const SolverOptions& options = {});

/// (pi_p (x) pi_e)^T vec(M). Requires both chains single-absorbing with
/// overlapping absorbing classes of coprime periods.
double mean_meeting_time(const TransitionMatrix& pursuer, const TransitionMatrix& evader,
                         const SolverOptions& options = {});

/// Pairwise hitting times of an irreducible chain via a frozen walker:
/// entry (i, j) is the expected time for a walker started at j to be at i at
/// some t >= 1, so the diagonal holds mean return times.
Eigen::MatrixXd hitting_times(const TransitionMatrix& matrix, const SolverOptions& options = {});

/// Group meeting times of L pursuers and M evaders: the first time any
/// pursuer shares a node with any evader.
MeetingTimeResult group_meeting_times(std::span<const TransitionMatrix> pursuers,
                                      std::span<const TransitionMatrix> evaders, const SolverOptions& options = {});

/// Single group meeting time from a start tuple (pursuers first, 0-based).
std::optional<double> group_meeting_time(std::span<const TransitionMatrix> pursuers,
                                         std::span<const TransitionMatrix> evaders, std::span<const int> start,
                                         const SolverOptions& options = {});

/// Stationary-weighted mean of an already solved result for the given chains,
/// or nullopt when it is undefined (some chain not single-absorbing, the
/// tuple outside SA-overlap, or a weighted start with infinite value).
std::optional<double> stationary_mean(const MeetingTimeResult& result, std::span<const TransitionMatrix> pursuers,
                                      std::span<const TransitionMatrix> evaders);

/// Stationary-weighted mean of the group meeting times.
double mean_group_meeting_time(std::span<const TransitionMatrix> pursuers, std::span<const TransitionMatrix> evaders,
                               const SolverOptions& options = {});

}  // namespace meetwalk

#endif  // MEETWALK_MEETING_DTMC_HPP
