#include "meetwalk/product_space.hpp"

#include <algorithm>
#include <string>

#include "meetwalk/error.hpp"

namespace meetwalk {
namespace {

template <class Matrix>
int common_dimension(std::span<const Matrix> pursuers, std::span<const Matrix> evaders) {
  if (pursuers.empty() || evaders.empty()) {
    throw ValidationError("need at least one pursuer and one evader");
  }
  const int n = pursuers.front().size();
  auto same = [n](const Matrix& m) { return m.size() == n; };
  if (!std::all_of(pursuers.begin(), pursuers.end(), same) || !std::all_of(evaders.begin(), evaders.end(), same)) {
    throw ValidationError("all chains must have the same number of nodes");
  }
  return n;
}

template <class Matrix>
std::vector<Matrix> concat(std::span<const Matrix> a, std::span<const Matrix> b) {
  std::vector<Matrix> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

template <class Matrix>
std::vector<Eigen::SparseMatrix<double, Eigen::ColMajor, int>> column_copies(const std::vector<Matrix>& factors) {
  std::vector<Eigen::SparseMatrix<double, Eigen::ColMajor, int>> out;
  out.reserve(factors.size());
  for (const auto& f : factors) {
    out.emplace_back(f.entries());
    out.back().makeCompressed();
  }
  return out;
}

// y += (I (x) A (x) I) x where A acts on the coordinate with the given stride.
void accumulate_mode_product(const SparseRowMatrix& a, std::size_t stride, std::span<const double> x,
                             std::span<double> y) {
  const auto n = static_cast<std::size_t>(a.rows());
  const std::size_t block = n * stride;
  for (std::size_t base = 0; base < x.size(); base += block) {
    for (std::size_t i = 0; i < n; ++i) {
      double* dst = y.data() + base + i * stride;
      for (SparseRowMatrix::InnerIterator it(a, static_cast<Eigen::Index>(i)); it; ++it) {
        const double* src = x.data() + base + static_cast<std::size_t>(it.col()) * stride;
        const double w = it.value();
        for (std::size_t r = 0; r < stride; ++r) dst[r] += w * src[r];
      }
    }
  }
}

template <class Graph>
std::vector<char> finite_region(const Graph& graph, const std::vector<char>& reaches, bool meeting_can_be_infinite) {
  const std::vector<char> meeting = graph.index().meeting_mask();
  std::vector<char> infinite(reaches.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < reaches.size(); ++s) {
    if (!reaches[s]) {
      infinite[s] = 1;
      stack.push_back(s);
    }
  }
  // Values propagate backwards only through non-meeting states: a walk is
  // stopped the moment it enters the meeting set.
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    graph.for_each_predecessor(v, [&](std::size_t u) {
      if (infinite[u]) return;
      if (meeting[u]) {
        if (meeting_can_be_infinite) infinite[u] = 1;
        return;
      }
      infinite[u] = 1;
      stack.push_back(u);
    });
  }
  for (auto& f : infinite) f = static_cast<char>(!f);
  return infinite;
}

}  // namespace

ProductIndex::ProductIndex(int node_count, int pursuers, int evaders, std::size_t state_budget)
    : n_(node_count), pursuers_(pursuers), evaders_(evaders), states_(1) {
  if (n_ < 1) throw ValidationError("product space needs n >= 1");
  if (pursuers_ < 1 || evaders_ < 1) throw ValidationError("need at least one pursuer and one evader");
  if (agents() > kMaxAgents) throw ValidationError("at most " + std::to_string(kMaxAgents) + " agents supported");
  for (int k = 0; k < agents(); ++k) {
    if (states_ > state_budget / static_cast<std::size_t>(n_)) {
      throw BudgetError("product space " + std::to_string(n_) + "^" + std::to_string(agents()) +
                        " exceeds the state budget of " + std::to_string(state_budget) + " states");
    }
    states_ *= static_cast<std::size_t>(n_);
  }
  std::size_t w = 1;
  for (int k = agents() - 1; k >= 0; --k) {
    strides_[static_cast<std::size_t>(k)] = w;
    w *= static_cast<std::size_t>(n_);
  }
}

std::size_t ProductIndex::flatten(std::span<const int> labels) const {
  if (labels.size() != static_cast<std::size_t>(agents())) {
    throw ValidationError("tuple has " + std::to_string(labels.size()) + " labels, expected " +
                          std::to_string(agents()));
  }
  std::size_t state = 0;
  for (int k = 0; k < agents(); ++k) {
    const int label = labels[static_cast<std::size_t>(k)];
    if (label < 0 || label >= n_) throw ValidationError("node label out of range");
    state += static_cast<std::size_t>(label) * stride(k);
  }
  return state;
}

void ProductIndex::unflatten(std::size_t state, std::span<int> labels) const {
  for (int k = agents() - 1; k >= 0; --k) {
    labels[static_cast<std::size_t>(k)] = static_cast<int>(state % static_cast<std::size_t>(n_));
    state /= static_cast<std::size_t>(n_);
  }
}

std::vector<int> ProductIndex::unflatten(std::size_t state) const {
  if (state >= states_) throw ValidationError("state index out of range");
  std::vector<int> labels(static_cast<std::size_t>(agents()));
  unflatten(state, labels);
  return labels;
}

bool ProductIndex::is_meeting(std::span<const int> labels) const {
  for (int a = 0; a < pursuers_; ++a) {
    for (int b = pursuers_; b < agents(); ++b) {
      if (labels[static_cast<std::size_t>(a)] == labels[static_cast<std::size_t>(b)]) return true;
    }
  }
  return false;
}

bool ProductIndex::is_meeting(std::size_t state) const {
  std::array<int, kMaxAgents> labels{};
  unflatten(state, std::span<int>(labels.data(), static_cast<std::size_t>(agents())));
  return is_meeting(std::span<const int>(labels.data(), static_cast<std::size_t>(agents())));
}

std::vector<char> ProductIndex::meeting_mask() const {
  std::vector<char> mask(states_);
  for (std::size_t s = 0; s < states_; ++s) mask[s] = static_cast<char>(is_meeting(s));
  return mask;
}

KroneckerProductGraph::KroneckerProductGraph(std::span<const TransitionMatrix> pursuers,
                                             std::span<const TransitionMatrix> evaders, std::size_t state_budget)
    : index_(common_dimension(pursuers, evaders), static_cast<int>(pursuers.size()),
             static_cast<int>(evaders.size()), state_budget),
      factors_(concat(pursuers, evaders)),
      columns_(column_copies(factors_)) {}

void KroneckerProductGraph::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t total = state_count();
  std::vector<double> current(x.begin(), x.end());
  std::vector<double> next(total);
  for (int k = 0; k < index_.agents(); ++k) {
    std::fill(next.begin(), next.end(), 0.0);
    accumulate_mode_product(factors_[static_cast<std::size_t>(k)].entries(), index_.stride(k), current, next);
    current.swap(next);
  }
  std::copy(current.begin(), current.end(), y.begin());
}

KroneckerSumGraph::KroneckerSumGraph(std::span<const RateMatrix> pursuers, std::span<const RateMatrix> evaders,
                                     std::size_t state_budget)
    : index_(common_dimension(pursuers, evaders), static_cast<int>(pursuers.size()),
             static_cast<int>(evaders.size()), state_budget),
      factors_(concat(pursuers, evaders)),
      columns_(column_copies(factors_)) {}

double KroneckerSumGraph::exit_rate(std::size_t state) const {
  std::array<int, kMaxAgents> labels{};
  index_.unflatten(state, std::span<int>(labels.data(), static_cast<std::size_t>(index_.agents())));
  double total = 0.0;
  for (int k = 0; k < index_.agents(); ++k) total += factors_[static_cast<std::size_t>(k)].exit_rate(labels[k]);
  return total;
}

void KroneckerSumGraph::apply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (int k = 0; k < index_.agents(); ++k) {
    accumulate_mode_product(factors_[static_cast<std::size_t>(k)].entries(), index_.stride(k), x, y);
  }
}

std::vector<char> reaches_meeting_set(const KroneckerProductGraph& graph) {
  return reaches_targets(graph, graph.index().meeting_mask());
}

std::vector<char> reaches_meeting_set(const KroneckerSumGraph& graph) {
  return reaches_targets(graph, graph.index().meeting_mask());
}

std::vector<char> reaches_meeting_set(std::span<const TransitionMatrix> pursuers,
                                      std::span<const TransitionMatrix> evaders, std::size_t state_budget) {
  return reaches_meeting_set(KroneckerProductGraph(pursuers, evaders, state_budget));
}

std::vector<char> finite_states(const KroneckerProductGraph& graph, const std::vector<char>& reaches) {
  return finite_region(graph, reaches, true);
}

std::vector<char> finite_states(const KroneckerSumGraph& graph, const std::vector<char>& reaches) {
  return finite_region(graph, reaches, false);
}

bool is_convergent(const SparseRowMatrix& matrix) {
  if (matrix.rows() != matrix.cols()) throw ValidationError("matrix must be square");
  const auto n = static_cast<std::size_t>(matrix.rows());
  std::vector<std::vector<std::size_t>> predecessors(n);
  std::vector<char> deficient(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (SparseRowMatrix::InnerIterator it(matrix, static_cast<Eigen::Index>(i)); it; ++it) {
      if (it.value() < 0.0) throw ValidationError("substochastic matrix has a negative entry");
      if (it.value() > 0.0) predecessors[static_cast<std::size_t>(it.col())].push_back(i);
      sum += it.value();
    }
    if (sum > 1.0 + 1e-12) throw ValidationError("substochastic matrix has a row sum above 1");
    deficient[i] = static_cast<char>(sum < 1.0 - 1e-12);
  }
  std::vector<char> reached = deficient;
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (deficient[i]) stack.push_back(i);
  }
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t u : predecessors[v]) {
      if (!reached[u]) {
        reached[u] = 1;
        stack.push_back(u);
      }
    }
  }
  return std::all_of(reached.begin(), reached.end(), [](char r) { return r != 0; });
}

bool is_convergent(const Eigen::MatrixXd& matrix) { return is_convergent(SparseRowMatrix(matrix.sparseView(0.0, 0.0))); }

SparseRowMatrix masked_product_matrix(const KroneckerProductGraph& graph) {
  const std::vector<char> meeting = graph.index().meeting_mask();
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t s = 0; s < graph.state_count(); ++s) {
    graph.for_each_successor(s, [&](std::size_t t, double p) {
      if (!meeting[t]) triplets.emplace_back(static_cast<int>(s), static_cast<int>(t), p);
    });
  }
  const auto size = static_cast<Eigen::Index>(graph.state_count());
  SparseRowMatrix m(size, size);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SparseRowMatrix joint_generator(const KroneckerSumGraph& graph) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t s = 0; s < graph.state_count(); ++s) {
    const auto row = static_cast<int>(s);
    graph.for_each_successor(s, [&](std::size_t t, double q) { triplets.emplace_back(row, static_cast<int>(t), q); });
    triplets.emplace_back(row, row, -graph.exit_rate(s));
  }
  const auto size = static_cast<Eigen::Index>(graph.state_count());
  SparseRowMatrix m(size, size);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

FinitenessCertificate make_certificate(const ProductIndex& index, const std::vector<char>& finite) {
  FinitenessCertificate cert;
  for (std::size_t s = 0; s < finite.size(); ++s) {
    if (finite[s]) continue;
    cert.all_finite = false;
    ++cert.infinite_count;
    if (cert.infinite_states.size() < FinitenessCertificate::kMaxListed) {
      cert.infinite_states.push_back(index.unflatten(s));
    }
  }
  return cert;
}

}  // namespace meetwalk
