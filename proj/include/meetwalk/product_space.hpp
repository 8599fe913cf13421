#ifndef MEETWALK_PRODUCT_SPACE_HPP
#define MEETWALK_PRODUCT_SPACE_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "meetwalk/matrices.hpp"

namespace meetwalk {

inline constexpr std::size_t kDefaultStateBudget = 10'000'000;
inline constexpr int kMaxAgents = 32;

/// Flattening of agent tuples (pursuers first, then evaders) onto
/// [0, n^(L+M)). The last label cycles fastest, so the joint one-step matrix
/// in this basis is literally P_1 (x) P_2 (x) ... (x) P_K.
class ProductIndex {
 public:
  ProductIndex(int node_count, int pursuers, int evaders, std::size_t state_budget = kDefaultStateBudget);

  int node_count() const { return n_; }
  int pursuers() const { return pursuers_; }
  int evaders() const { return evaders_; }
  int agents() const { return pursuers_ + evaders_; }
  std::size_t state_count() const { return states_; }
  /// Weight of `position` in the flattened index, n^(agents-1-position).
  std::size_t stride(int position) const { return strides_[static_cast<std::size_t>(position)]; }

  std::size_t flatten(std::span<const int> labels) const;
  void unflatten(std::size_t state, std::span<int> labels) const;
  std::vector<int> unflatten(std::size_t state) const;

  /// Some pursuer label equals some evader label (generalized Kronecker delta).
  bool is_meeting(std::span<const int> labels) const;
  bool is_meeting(std::size_t state) const;
  std::vector<char> meeting_mask() const;

 private:
  int n_;
  int pursuers_;
  int evaders_;
  std::size_t states_;
  std::array<std::size_t, kMaxAgents> strides_{};
};

/// Joint discrete-time chain of independent walkers: every coordinate steps
/// at once, so u -> v is an edge iff each factor has a positive entry from
/// u's label to v's label. Never materialized.
class KroneckerProductGraph {
 public:
  KroneckerProductGraph(std::span<const TransitionMatrix> pursuers, std::span<const TransitionMatrix> evaders,
                        std::size_t state_budget = kDefaultStateBudget);

  const ProductIndex& index() const { return index_; }
  std::size_t state_count() const { return index_.state_count(); }
  const std::vector<TransitionMatrix>& factors() const { return factors_; }

  /// visit(next_state, probability) for every successor with probability > 0.
  template <class Visit>
  void for_each_successor(std::size_t state, Visit&& visit) const;

  /// visit(previous_state) for every state with an edge into `state`.
  template <class Visit>
  void for_each_predecessor(std::size_t state, Visit&& visit) const;

  /// y = (P_1 (x) ... (x) P_K) x, applied factor by factor.
  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  ProductIndex index_;
  std::vector<TransitionMatrix> factors_;
  std::vector<Eigen::SparseMatrix<double, Eigen::ColMajor, int>> columns_;
};

/// Joint continuous-time chain: generator is the Kronecker sum
/// sum_k I (x) ... (x) Q_k (x) ... (x) I, so each edge changes exactly one
/// coordinate through a positive off-diagonal rate of that coordinate's factor.
class KroneckerSumGraph {
 public:
  KroneckerSumGraph(std::span<const RateMatrix> pursuers, std::span<const RateMatrix> evaders,
                    std::size_t state_budget = kDefaultStateBudget);

  const ProductIndex& index() const { return index_; }
  std::size_t state_count() const { return index_.state_count(); }
  const std::vector<RateMatrix>& factors() const { return factors_; }

  /// visit(next_state, rate) for every off-diagonal transition.
  template <class Visit>
  void for_each_successor(std::size_t state, Visit&& visit) const;

  template <class Visit>
  void for_each_predecessor(std::size_t state, Visit&& visit) const;

  /// Sum of exit rates of all agents, i.e. minus the joint diagonal entry.
  double exit_rate(std::size_t state) const;

  /// y = Q_joint x, including the diagonal.
  void apply(std::span<const double> x, std::span<double> y) const;

 private:
  ProductIndex index_;
  std::vector<RateMatrix> factors_;
  std::vector<Eigen::SparseMatrix<double, Eigen::ColMajor, int>> columns_;
};

/// Reverse breadth-first search: result[s] != 0 iff some walk (possibly of
/// length zero) leads from s into a state with target[s] != 0.
template <class Graph>
std::vector<char> reaches_targets(const Graph& graph, const std::vector<char>& target);

/// result[s] != 0 iff a walk from s enters the meeting set.
std::vector<char> reaches_meeting_set(const KroneckerProductGraph& graph);
std::vector<char> reaches_meeting_set(const KroneckerSumGraph& graph);
std::vector<char> reaches_meeting_set(std::span<const TransitionMatrix> pursuers,
                                      std::span<const TransitionMatrix> evaders,
                                      std::size_t state_budget = kDefaultStateBudget);

/// States whose expected meeting time is finite.
///
/// Discrete time: the walk is stopped on entering the meeting set at t >= 1,
/// so a state is finite iff no state reachable from it through non-meeting
/// states fails to reach the meeting set. Continuous time: meeting states
/// are boundary states with value zero and are always finite.
std::vector<char> finite_states(const KroneckerProductGraph& graph, const std::vector<char>& reaches);
std::vector<char> finite_states(const KroneckerSumGraph& graph, const std::vector<char>& reaches);

/// A substochastic matrix is convergent iff every state has a walk in its
/// support to a row whose sum is below 1 - 1e-12.
bool is_convergent(const SparseRowMatrix& matrix);
bool is_convergent(const Eigen::MatrixXd& matrix);

/// (P_1 (x) ... (x) P_K) E with the meeting-set columns zeroed.
SparseRowMatrix masked_product_matrix(const KroneckerProductGraph& graph);
/// The full joint generator of a Kronecker sum.
SparseRowMatrix joint_generator(const KroneckerSumGraph& graph);

/// Summary of which start tuples have infinite meeting times.
struct FinitenessCertificate {
  static constexpr std::size_t kMaxListed = 100;

  bool all_finite = true;
  std::size_t infinite_count = 0;
  /// At most kMaxListed infinite start tuples (0-based labels), by flattened index.
  std::vector<std::vector<int>> infinite_states;
};

FinitenessCertificate make_certificate(const ProductIndex& index, const std::vector<char>& finite);

// ---------------------------------------------------------------------------

template <class Visit>
void KroneckerProductGraph::for_each_successor(std::size_t state, Visit&& visit) const {
  const int k_count = index_.agents();
  std::array<int, kMaxAgents> labels{};
  std::array<int, kMaxAgents> pos{};
  std::array<int, kMaxAgents> end{};
  index_.unflatten(state, std::span<int>(labels.data(), static_cast<std::size_t>(k_count)));
  for (int k = 0; k < k_count; ++k) {
    const auto& m = factors_[static_cast<std::size_t>(k)].entries();
    pos[k] = m.outerIndexPtr()[labels[k]];
    end[k] = m.outerIndexPtr()[labels[k] + 1];
    if (pos[k] == end[k]) return;
  }
  const std::array<int, kMaxAgents> begin = pos;
  while (true) {
    std::size_t next = 0;
    double prob = 1.0;
    for (int k = 0; k < k_count; ++k) {
      const auto& m = factors_[static_cast<std::size_t>(k)].entries();
      next += static_cast<std::size_t>(m.innerIndexPtr()[pos[k]]) * index_.stride(k);
      prob *= m.valuePtr()[pos[k]];
    }
    visit(next, prob);
    int k = k_count - 1;
    while (k >= 0 && ++pos[k] == end[k]) {
      pos[k] = begin[k];
      --k;
    }
    if (k < 0) return;
  }
}

template <class Visit>
void KroneckerProductGraph::for_each_predecessor(std::size_t state, Visit&& visit) const {
  const int k_count = index_.agents();
  std::array<int, kMaxAgents> labels{};
  std::array<int, kMaxAgents> pos{};
  std::array<int, kMaxAgents> begin{};
  std::array<int, kMaxAgents> end{};
  index_.unflatten(state, std::span<int>(labels.data(), static_cast<std::size_t>(k_count)));
  for (int k = 0; k < k_count; ++k) {
    const auto& m = columns_[static_cast<std::size_t>(k)];
    begin[k] = pos[k] = m.outerIndexPtr()[labels[k]];
    end[k] = m.outerIndexPtr()[labels[k] + 1];
    if (pos[k] == end[k]) return;
  }
  while (true) {
    std::size_t prev = 0;
    for (int k = 0; k < k_count; ++k) {
      prev += static_cast<std::size_t>(columns_[static_cast<std::size_t>(k)].innerIndexPtr()[pos[k]]) *
              index_.stride(k);
    }
    visit(prev);
    int k = k_count - 1;
    while (k >= 0 && ++pos[k] == end[k]) {
      pos[k] = begin[k];
      --k;
    }
    if (k < 0) return;
  }
}

template <class Visit>
void KroneckerSumGraph::for_each_successor(std::size_t state, Visit&& visit) const {
  const int k_count = index_.agents();
  std::array<int, kMaxAgents> labels{};
  index_.unflatten(state, std::span<int>(labels.data(), static_cast<std::size_t>(k_count)));
  for (int k = 0; k < k_count; ++k) {
    const auto& m = factors_[static_cast<std::size_t>(k)].entries();
    const std::size_t base = state - static_cast<std::size_t>(labels[k]) * index_.stride(k);
    for (int p = m.outerIndexPtr()[labels[k]]; p < m.outerIndexPtr()[labels[k] + 1]; ++p) {
      const int col = m.innerIndexPtr()[p];
      if (col == labels[k] || m.valuePtr()[p] <= 0.0) continue;
      visit(base + static_cast<std::size_t>(col) * index_.stride(k), m.valuePtr()[p]);
    }
  }
}

template <class Visit>
void KroneckerSumGraph::for_each_predecessor(std::size_t state, Visit&& visit) const {
  const int k_count = index_.agents();
  std::array<int, kMaxAgents> labels{};
  index_.unflatten(state, std::span<int>(labels.data(), static_cast<std::size_t>(k_count)));
  for (int k = 0; k < k_count; ++k) {
    const auto& m = columns_[static_cast<std::size_t>(k)];
    const std::size_t base = state - static_cast<std::size_t>(labels[k]) * index_.stride(k);
    for (int p = m.outerIndexPtr()[labels[k]]; p < m.outerIndexPtr()[labels[k] + 1]; ++p) {
      const int row = m.innerIndexPtr()[p];
      if (row == labels[k] || m.valuePtr()[p] <= 0.0) continue;
      visit(base + static_cast<std::size_t>(row) * index_.stride(k));
    }
  }
}

template <class Graph>
std::vector<char> reaches_targets(const Graph& graph, const std::vector<char>& target) {
  std::vector<char> reached(target);
  std::vector<std::size_t> frontier;
  for (std::size_t s = 0; s < target.size(); ++s) {
    if (target[s]) frontier.push_back(s);
  }
  while (!frontier.empty()) {
    const std::size_t v = frontier.back();
    frontier.pop_back();
    graph.for_each_predecessor(v, [&](std::size_t u) {
      if (!reached[u]) {
        reached[u] = 1;
        frontier.push_back(u);
      }
    });
  }
  return reached;
}

}  // namespace meetwalk

#endif  // MEETWALK_PRODUCT_SPACE_HPP
