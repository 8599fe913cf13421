#include "meetwalk/meeting_ctmc.hpp"

#include <Eigen/SparseLU>

#include "absorbing_solver.hpp"
#include "meetwalk/error.hpp"

namespace meetwalk {

MeetingTimeResult ctmc_meeting_times(const RateMatrix& pursuer, const RateMatrix& evader,
                                     const SolverOptions& options) {
  if (pursuer.size() != evader.size()) throw ValidationError("all chains must have the same number of nodes");
  return ctmc_group_meeting_times(std::span(&pursuer, 1), std::span(&evader, 1), options);
}

MeetingTimeResult ctmc_group_meeting_times(std::span<const RateMatrix> pursuers, std::span<const RateMatrix> evaders,
                                           const SolverOptions& options) {
  const KroneckerSumGraph graph(pursuers, evaders, options.state_budget);
  const std::vector<char> meeting = graph.index().meeting_mask();
  const std::vector<char> finite = finite_states(graph, reaches_targets(graph, meeting));
  detail::SolveOutcome out = detail::solve_continuous(graph, meeting, finite, options);
  return MeetingTimeResult(graph.index(), TimeModel::continuous, std::move(out.values), finite, out.residual,
                           std::move(out.method), out.iterations);
}

std::vector<std::optional<double>> ctmc_hitting_times(const RateMatrix& matrix, std::span<const int> targets) {
  if (targets.empty()) throw ValidationError("target set must not be empty");
  const int n = matrix.size();
  std::vector<char> target(static_cast<std::size_t>(n), 0);
  for (int t : targets) {
    if (t < 0 || t >= n) throw ValidationError("target node out of range");
    target[static_cast<std::size_t>(t)] = 1;
  }

  std::vector<std::vector<int>> predecessors(static_cast<std::size_t>(n));
  const auto support = matrix.support();
  for (int a = 0; a < n; ++a) {
    for (int b : support[static_cast<std::size_t>(a)]) predecessors[static_cast<std::size_t>(b)].push_back(a);
  }
  auto spread = [&](std::vector<char>& mark, bool through_targets) {
    std::vector<int> stack;
    for (int a = 0; a < n; ++a) {
      if (mark[static_cast<std::size_t>(a)]) stack.push_back(a);
    }
    while (!stack.empty()) {
      const int b = stack.back();
      stack.pop_back();
      for (int a : predecessors[static_cast<std::size_t>(b)]) {
        if (mark[static_cast<std::size_t>(a)] || (!through_targets && target[static_cast<std::size_t>(a)])) continue;
        mark[static_cast<std::size_t>(a)] = 1;
        stack.push_back(a);
      }
    }
  };
  std::vector<char> reaches = target;
  spread(reaches, true);
  std::vector<char> infinite(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) infinite[static_cast<std::size_t>(a)] = !reaches[static_cast<std::size_t>(a)];
  spread(infinite, false);

  std::vector<int> local(static_cast<std::size_t>(n), -1);
  std::vector<int> rows;
  for (int a = 0; a < n; ++a) {
    if (!target[static_cast<std::size_t>(a)] && !infinite[static_cast<std::size_t>(a)]) {
      local[static_cast<std::size_t>(a)] = static_cast<int>(rows.size());
      rows.push_back(a);
    }
  }
  std::vector<std::optional<double>> h(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    if (target[static_cast<std::size_t>(a)]) h[static_cast<std::size_t>(a)] = 0.0;
  }
  if (rows.empty()) return h;

  // -sum_b q_ab h_b = 1 on the finite non-target nodes, h = 0 on targets.
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (SparseRowMatrix::InnerIterator it(matrix.entries(), rows[r]); it; ++it) {
      const int c = local[static_cast<std::size_t>(it.col())];
      if (c >= 0) triplets.emplace_back(static_cast<int>(r), c, -it.value());
    }
  }
  const auto size = static_cast<Eigen::Index>(rows.size());
  Eigen::SparseMatrix<double> a(size, size);
  a.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw NumericalError("hitting-time system is singular");
  const Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Ones(size));
  for (std::size_t r = 0; r < rows.size(); ++r) h[static_cast<std::size_t>(rows[r])] = x(static_cast<Eigen::Index>(r));
  return h;
}

}  // namespace meetwalk
