#ifndef MEETWALK_SRC_ABSORBING_SOLVER_HPP
#define MEETWALK_SRC_ABSORBING_SOLVER_HPP

#include <string>
#include <vector>

#include "meetwalk/meeting_result.hpp"
#include "meetwalk/product_space.hpp"

namespace meetwalk::detail {

struct SolveOutcome {
  std::vector<double> values;  // full state space; zero outside the unknowns
  double residual = 0.0;
  std::string method = "none";
  int iterations = 0;
};

/// Discrete time: m_s - sum_{t not meeting} P(s,t) m_t = 1 for every s with
/// unknown[s]. Every non-meeting successor of an unknown must be unknown.
SolveOutcome solve_discrete(const KroneckerProductGraph& graph, const std::vector<char>& meeting,
                            const std::vector<char>& unknown, const SolverOptions& options);

/// Continuous time: m = 0 on the meeting set and -sum_t Q(s,t) m_t = 1 for
/// every non-meeting s with unknown[s].
SolveOutcome solve_continuous(const KroneckerSumGraph& graph, const std::vector<char>& meeting,
                              const std::vector<char>& unknown, const SolverOptions& options);

/// States reachable from `start`, expanding only through non-meeting states
/// (the start itself is always expanded).
std::vector<char> forward_closure(const KroneckerProductGraph& graph, const std::vector<char>& meeting,
                                  std::size_t start);

}  // namespace meetwalk::detail

#endif  // MEETWALK_SRC_ABSORBING_SOLVER_HPP
