#include "meetwalk/meeting_dtmc.hpp"

#include <array>

#include "absorbing_solver.hpp"
#include "meetwalk/chain_analysis.hpp"
#include "meetwalk/error.hpp"

namespace meetwalk {
namespace {

constexpr const char* kMeanUndefined =
    "mean meeting time undefined: stationary distributions not unique or meeting times not finite";

MeetingTimeResult solve_all(const KroneckerProductGraph& graph, const SolverOptions& options) {
  const std::vector<char> meeting = graph.index().meeting_mask();
  const std::vector<char> finite = finite_states(graph, reaches_targets(graph, meeting));
  detail::SolveOutcome out = detail::solve_discrete(graph, meeting, finite, options);
  return MeetingTimeResult(graph.index(), TimeModel::discrete, std::move(out.values), finite, out.residual,
                           std::move(out.method), out.iterations);
}

std::optional<double> solve_from(const KroneckerProductGraph& graph, std::size_t start, const SolverOptions& options) {
  const std::vector<char> meeting = graph.index().meeting_mask();
  const std::vector<char> reaches = reaches_targets(graph, meeting);
  std::vector<char> unknown = detail::forward_closure(graph, meeting, start);
  for (std::size_t s = 0; s < unknown.size(); ++s) {
    if (!unknown[s]) continue;
    if (meeting[s] && s != start) {
      unknown[s] = 0;
    } else if (!reaches[s]) {
      return std::nullopt;
    }
  }
  const detail::SolveOutcome out = detail::solve_discrete(graph, meeting, unknown, options);
  return out.values[start];
}

// Weighted sum of a result with the Kronecker product of per-chain weights;
// nullopt if a start with positive weight has an infinite value.
std::optional<double> stationary_average(const MeetingTimeResult& result, const std::vector<Eigen::VectorXd>& weights) {
  const ProductIndex& index = result.index();
  std::vector<int> labels(static_cast<std::size_t>(index.agents()));
  double total = 0.0;
  for (std::size_t s = 0; s < index.state_count(); ++s) {
    index.unflatten(s, labels);
    double w = 1.0;
    for (std::size_t k = 0; k < labels.size() && w != 0.0; ++k) w *= weights[k](labels[k]);
    if (w == 0.0) continue;
    const std::optional<double> v = result.value(s);
    if (!v) return std::nullopt;
    total += w * *v;
  }
  return total;
}

void require_pair_dimensions(const TransitionMatrix& a, const TransitionMatrix& b) {
  if (a.size() != b.size()) throw ValidationError("all chains must have the same number of nodes");
}

}  // namespace

MeetingTimeResult meeting_times(const TransitionMatrix& pursuer, const TransitionMatrix& evader,
                                const SolverOptions& options) {
  require_pair_dimensions(pursuer, evader);
  return group_meeting_times(std::span(&pursuer, 1), std::span(&evader, 1), options);
}

std::optional<double> meeting_time_pair(const TransitionMatrix& pursuer, const TransitionMatrix& evader, int i, int j,
                                        const SolverOptions& options) {
  require_pair_dimensions(pursuer, evader);
  const std::array<int, 2> start{i, j};
  return group_meeting_time(std::span(&pursuer, 1), std::span(&evader, 1), start, options);
}

double mean_meeting_time(const TransitionMatrix& pursuer, const TransitionMatrix& evader,
                         const SolverOptions& options) {
  require_pair_dimensions(pursuer, evader);
  return mean_group_meeting_time(std::span(&pursuer, 1), std::span(&evader, 1), options);
}

Eigen::MatrixXd hitting_times(const TransitionMatrix& matrix, const SolverOptions& options) {
  if (!decompose(matrix).is_irreducible()) throw ValidationError("hitting times need an irreducible chain");
  return meeting_times(TransitionMatrix::identity(matrix.size()), matrix, options).to_matrix();
}

MeetingTimeResult group_meeting_times(std::span<const TransitionMatrix> pursuers,
                                      std::span<const TransitionMatrix> evaders, const SolverOptions& options) {
  return solve_all(KroneckerProductGraph(pursuers, evaders, options.state_budget), options);
}

std::optional<double> group_meeting_time(std::span<const TransitionMatrix> pursuers,
                                         std::span<const TransitionMatrix> evaders, std::span<const int> start,
                                         const SolverOptions& options) {
  const KroneckerProductGraph graph(pursuers, evaders, options.state_budget);
  return solve_from(graph, graph.index().flatten(start), options);
}

std::optional<double> stationary_mean(const MeetingTimeResult& result, std::span<const TransitionMatrix> pursuers,
                                      std::span<const TransitionMatrix> evaders) {
  std::vector<Eigen::VectorXd> weights;
  for (const auto& group : {pursuers, evaders}) {
    for (const TransitionMatrix& p : group) {
      if (!decompose(p).is_single_absorbing()) return std::nullopt;
      weights.push_back(stationary_distribution(p));
    }
  }
  if (!classify_tuple(pursuers, evaders, result.index().state_count()).sa_overlap) return std::nullopt;
  return stationary_average(result, weights);
}

double mean_group_meeting_time(std::span<const TransitionMatrix> pursuers, std::span<const TransitionMatrix> evaders,
                               const SolverOptions& options) {
  const std::optional<double> mean =
      stationary_mean(group_meeting_times(pursuers, evaders, options), pursuers, evaders);
  if (!mean) throw ValidationError(kMeanUndefined);
  return *mean;
}

}  // namespace meetwalk
