#include "absorbing_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>

#include "linear_operator.hpp"
#include "meetwalk/error.hpp"

namespace meetwalk::detail {
namespace {

std::vector<std::size_t> list_unknowns(const std::vector<char>& unknown) {
  std::vector<std::size_t> list;
  for (std::size_t s = 0; s < unknown.size(); ++s) {
    if (unknown[s]) list.push_back(s);
  }
  return list;
}

std::vector<std::int64_t> local_numbering(const std::vector<std::size_t>& list, std::size_t total) {
  std::vector<std::int64_t> local(total, -1);
  for (std::size_t k = 0; k < list.size(); ++k) local[list[k]] = static_cast<std::int64_t>(k);
  return local;
}

// x restricted to unknown non-meeting states, zero elsewhere.
std::vector<double> transient_part(std::span<const double> x, const std::vector<char>& meeting,
                                   const std::vector<char>& unknown) {
  std::vector<double> z(x.size(), 0.0);
  for (std::size_t s = 0; s < x.size(); ++s) {
    if (unknown[s] && !meeting[s]) z[s] = x[s];
  }
  return z;
}

double discrete_residual(const KroneckerProductGraph& graph, const std::vector<char>& meeting,
                         const std::vector<char>& unknown, const std::vector<double>& m) {
  const std::vector<double> z = transient_part(m, meeting, unknown);
  std::vector<double> pz(m.size());
  graph.apply(z, pz);
  double worst = 0.0;
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (unknown[s]) worst = std::max(worst, std::abs(m[s] - 1.0 - pz[s]));
  }
  return worst;
}

double continuous_residual(const KroneckerSumGraph& graph, const std::vector<char>& meeting,
                           const std::vector<char>& unknown, const std::vector<double>& m) {
  const std::vector<double> z = transient_part(m, meeting, unknown);
  std::vector<double> qz(m.size());
  graph.apply(z, qz);
  double worst = 0.0;
  for (std::size_t s = 0; s < m.size(); ++s) {
    if (!unknown[s]) continue;
    worst = std::max(worst, meeting[s] ? std::abs(m[s]) : std::abs(-qz[s] - 1.0));
  }
  return worst;
}

struct IterativeResult {
  std::vector<double> x;
  int iterations = 0;
};

// BiCGSTAB, restarted from the current iterate with a tighter tolerance while
// the caller's residual check still fails.
template <class Residual>
IterativeResult bicgstab(const LinearOperator& op, const Eigen::VectorXd& rhs, const SolverOptions& options,
                         Residual&& residual_of) {
  Eigen::BiCGSTAB<LinearOperator, Eigen::IdentityPreconditioner> solver;
  solver.compute(op);
  solver.setMaxIterations(options.max_iterations);
  double tolerance = options.tolerance;
  solver.setTolerance(tolerance);
  Eigen::VectorXd x = solver.solve(rhs);
  int iterations = static_cast<int>(solver.iterations());
  for (int round = 0; round < 4; ++round) {
    const std::vector<double> candidate(x.data(), x.data() + x.size());
    if (solver.info() == Eigen::Success && residual_of(candidate) <= 1e-9) break;
    tolerance = std::max(tolerance * 1e-2, 1e-15);
    solver.setTolerance(tolerance);
    x = solver.solveWithGuess(rhs, x);
    iterations += static_cast<int>(solver.iterations());
  }
  if (solver.info() == Eigen::NumericalIssue || !x.allFinite()) {
    throw NumericalError("iterative meeting-time solve broke down after " + std::to_string(iterations) +
                         " iterations");
  }
  return {std::vector<double>(x.data(), x.data() + x.size()), iterations};
}

}  // namespace

std::vector<char> forward_closure(const KroneckerProductGraph& graph, const std::vector<char>& meeting,
                                  std::size_t start) {
  std::vector<char> seen(graph.state_count(), 0);
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    const std::size_t s = stack.back();
    stack.pop_back();
    if (meeting[s] && s != start) continue;
    graph.for_each_successor(s, [&](std::size_t t, double) {
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    });
  }
  return seen;
}

SolveOutcome solve_discrete(const KroneckerProductGraph& graph, const std::vector<char>& meeting,
                            const std::vector<char>& unknown, const SolverOptions& options) {
  const std::size_t total = graph.state_count();
  const std::vector<std::size_t> list = list_unknowns(unknown);
  SolveOutcome out;
  out.values.assign(total, 0.0);
  if (list.empty()) return out;

  if (list.size() <= options.dense_limit) {
    const std::vector<std::int64_t> local = local_numbering(list, total);
    const auto size = static_cast<Eigen::Index>(list.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(size, size);
    for (Eigen::Index row = 0; row < size; ++row) {
      graph.for_each_successor(list[static_cast<std::size_t>(row)], [&](std::size_t t, double p) {
        if (meeting[t]) return;
        if (local[t] < 0) throw std::logic_error("unknown set is not closed under transitions");
        a(row, local[t]) -= p;
      });
    }
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(size);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::VectorXd x = lu.solve(b);
    x += lu.solve(b - a * x);
    for (Eigen::Index k = 0; k < size; ++k) out.values[list[static_cast<std::size_t>(k)]] = x(k);
    out.method = "dense-lu";
  } else {
    const LinearOperator op(static_cast<Eigen::Index>(total), [&](std::span<const double> x, std::span<double> y) {
      const std::vector<double> z = transient_part(x, meeting, unknown);
      graph.apply(z, y);
      for (std::size_t s = 0; s < total; ++s) y[s] = unknown[s] ? x[s] - y[s] : x[s];
    });
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(total));
    for (std::size_t s = 0; s < total; ++s) rhs(static_cast<Eigen::Index>(s)) = unknown[s] ? 1.0 : 0.0;
    IterativeResult r = bicgstab(op, rhs, options, [&](const std::vector<double>& m) {
      return discrete_residual(graph, meeting, unknown, m);
    });
    out.values = std::move(r.x);
    for (std::size_t s = 0; s < total; ++s) {
      if (!unknown[s]) out.values[s] = 0.0;
    }
    out.iterations = r.iterations;
    out.method = "bicgstab";
  }
  out.residual = discrete_residual(graph, meeting, unknown, out.values);
  return out;
}

SolveOutcome solve_continuous(const KroneckerSumGraph& graph, const std::vector<char>& meeting,
                              const std::vector<char>& unknown, const SolverOptions& options) {
  const std::size_t total = graph.state_count();
  const std::vector<std::size_t> list = list_unknowns(unknown);
  SolveOutcome out;
  out.values.assign(total, 0.0);
  if (list.empty()) return out;

  if (list.size() <= options.dense_limit) {
    // Literal (E(I - Q) - I) m = E 1 on the unknown states.
    const std::vector<std::int64_t> local = local_numbering(list, total);
    const auto size = static_cast<Eigen::Index>(list.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(size);
    for (Eigen::Index row = 0; row < size; ++row) {
      const std::size_t s = list[static_cast<std::size_t>(row)];
      if (meeting[s]) {
        a(row, row) = -1.0;
        continue;
      }
      a(row, row) = graph.exit_rate(s);
      b(row) = 1.0;
      graph.for_each_successor(s, [&](std::size_t t, double q) {
        if (local[t] < 0) throw std::logic_error("unknown set is not closed under transitions");
        a(row, local[t]) -= q;
      });
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::VectorXd x = lu.solve(b);
    x += lu.solve(b - a * x);
    for (Eigen::Index k = 0; k < size; ++k) {
      const std::size_t s = list[static_cast<std::size_t>(k)];
      out.values[s] = meeting[s] ? 0.0 : x(k);
    }
    out.method = "dense-lu";
  } else {
    // Rows divided by the exit rate: the embedded jump chain of the generator.
    std::vector<double> exit(total, 0.0);
    for (std::size_t s = 0; s < total; ++s) {
      if (unknown[s] && !meeting[s]) exit[s] = graph.exit_rate(s);
    }
    const LinearOperator op(static_cast<Eigen::Index>(total), [&](std::span<const double> x, std::span<double> y) {
      const std::vector<double> z = transient_part(x, meeting, unknown);
      graph.apply(z, y);
      for (std::size_t s = 0; s < total; ++s) y[s] = exit[s] > 0.0 ? -y[s] / exit[s] : x[s];
    });
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(total));
    for (std::size_t s = 0; s < total; ++s) rhs(static_cast<Eigen::Index>(s)) = exit[s] > 0.0 ? 1.0 / exit[s] : 0.0;
    IterativeResult r = bicgstab(op, rhs, options, [&](const std::vector<double>& m) {
      return continuous_residual(graph, meeting, unknown, m);
    });
    out.values = std::move(r.x);
    for (std::size_t s = 0; s < total; ++s) {
      if (!unknown[s] || meeting[s]) out.values[s] = 0.0;
    }
    out.iterations = r.iterations;
    out.method = "bicgstab";
  }
  out.residual = continuous_residual(graph, meeting, unknown, out.values);
  return out;
}

}  // namespace meetwalk::detail
