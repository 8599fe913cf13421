#include "meetwalk/chain_analysis.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "meetwalk/error.hpp"
#include "meetwalk/product_space.hpp"

namespace meetwalk {
namespace {

// Iterative Tarjan; returns component id per node.
std::vector<int> strong_components(const std::vector<std::vector<int>>& adjacency, int& count) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;  // (node, next edge)
  int next_index = 0;
  count = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < adjacency[v].size()) {
        const int w = adjacency[v][edge++];
        if (index[w] < 0) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const int finished = v;
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
      if (low[finished] == index[finished]) {
        int w = -1;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          component[w] = count;
        } while (w != finished);
        ++count;
      }
    }
  }
  return component;
}

// gcd over intra-class edges of level(u) + 1 - level(v), levels from a BFS
// rooted inside the class.
int class_period(const std::vector<std::vector<int>>& adjacency, const std::vector<int>& class_of, int cls,
                 int root) {
  std::vector<int> level(adjacency.size(), -1);
  std::queue<int> queue;
  level[root] = 0;
  queue.push(root);
  int g = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (int v : adjacency[u]) {
      if (class_of[v] != cls) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push(v);
      } else {
        g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  return g == 0 ? 1 : g;
}

Eigen::VectorXd stationary_on_class(const Eigen::MatrixXd& dense_generator_minus, const ChainDecomposition& d,
                                    int node_count, const char* what) {
  const auto absorbing = d.absorbing_classes();
  if (absorbing.size() != 1) {
    throw ValidationError(std::string("stationary distribution not unique: ") + what + " has " +
                          std::to_string(absorbing.size()) + " absorbing classes");
  }
  const std::vector<int>& nodes = absorbing.front()->nodes;
  const auto k = static_cast<Eigen::Index>(nodes.size());
  // Solve pi^T G = 0 on the absorbing class with sum(pi) = 1 replacing one equation.
  Eigen::MatrixXd system(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) system(b, a) = dense_generator_minus(nodes[a], nodes[b]);
  }
  system.row(k - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  rhs(k - 1) = 1.0;
  const Eigen::VectorXd local = system.fullPivLu().solve(rhs);
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(node_count);
  for (Eigen::Index a = 0; a < k; ++a) pi(nodes[a]) = std::max(0.0, local(a));
  pi /= pi.sum();
  return pi;
}

int gcd_int(int a, int b) { return std::gcd(a, b); }

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

PairClassification classify_pairs(std::span<const TransitionMatrix> pursuers, std::span<const TransitionMatrix> evaders,
                                  std::size_t state_budget) {
  if (pursuers.empty() || evaders.empty()) throw ValidationError("need at least one pursuer and one evader");
  const int n = pursuers.front().size();
  for (const auto* group : {&pursuers, &evaders}) {
    for (const auto& m : *group) {
      if (m.size() != n) throw ValidationError("dimension mismatch between chains");
    }
  }
  std::vector<ChainDecomposition> pd, ed;
  for (const auto& m : pursuers) pd.push_back(decompose(m));
  for (const auto& m : evaders) ed.push_back(decompose(m));

  PairClassification c;
  c.one_ergodic = std::any_of(pd.begin(), pd.end(), [](const auto& d) { return d.is_ergodic(); }) ||
                  std::any_of(ed.begin(), ed.end(), [](const auto& d) { return d.is_ergodic(); });
  auto each_pursuer_has_partner = [&](auto&& relation) {
    return std::all_of(pd.begin(), pd.end(), [&](const ChainDecomposition& p) {
      return std::any_of(ed.begin(), ed.end(), [&](const ChainDecomposition& e) { return relation(p, e); });
    });
  };
  c.sa_overlap = each_pursuer_has_partner(in_sa_overlap);
  c.all_overlap = each_pursuer_has_partner(in_all_overlap);

  KroneckerProductGraph graph(pursuers, evaders, state_budget);
  const std::vector<char> reaches = reaches_meeting_set(graph);
  const auto miss = std::find(reaches.begin(), reaches.end(), 0);
  c.finite = miss == reaches.end();
  if (!c.finite) c.witness = graph.index().unflatten(static_cast<std::size_t>(miss - reaches.begin()));
  return c;
}

}  // namespace

std::vector<const CommunicatingClass*> ChainDecomposition::absorbing_classes() const {
  std::vector<const CommunicatingClass*> out;
  for (const auto& c : classes) {
    if (c.kind == ClassKind::absorbing) out.push_back(&c);
  }
  return out;
}

bool ChainDecomposition::is_single_absorbing() const { return absorbing_classes().size() == 1; }

ChainDecomposition decompose(const std::vector<std::vector<int>>& adjacency) {
  ChainDecomposition d;
  d.node_count = static_cast<int>(adjacency.size());
  int count = 0;
  std::vector<int> component = strong_components(adjacency, count);

  // Renumber classes by smallest member so output order is canonical.
  std::vector<int> first_node(static_cast<std::size_t>(count), d.node_count);
  for (int v = 0; v < d.node_count; ++v) first_node[component[v]] = std::min(first_node[component[v]], v);
  std::vector<int> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return first_node[a] < first_node[b]; });
  std::vector<int> rename(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) rename[order[i]] = i;

  d.class_of.resize(static_cast<std::size_t>(d.node_count));
  d.classes.resize(static_cast<std::size_t>(count));
  for (int v = 0; v < d.node_count; ++v) {
    d.class_of[v] = rename[component[v]];
    d.classes[d.class_of[v]].nodes.push_back(v);
  }
  for (int c = 0; c < count; ++c) {
    CommunicatingClass& cls = d.classes[c];
    bool closed = true;
    for (int u : cls.nodes) {
      for (int v : adjacency[u]) closed = closed && d.class_of[v] == c;
    }
    cls.kind = closed ? ClassKind::absorbing : ClassKind::transient;
    cls.period = class_period(adjacency, d.class_of, c, cls.nodes.front());
  }
  return d;
}

ChainDecomposition decompose(const TransitionMatrix& matrix) { return decompose(matrix.support()); }

ChainDecomposition decompose(const RateMatrix& matrix) {
  ChainDecomposition d = decompose(matrix.support());
  for (auto& c : d.classes) c.period = 1;
  return d;
}

Eigen::VectorXd stationary_distribution(const TransitionMatrix& matrix) {
  const Eigen::MatrixXd g = matrix.to_dense() - Eigen::MatrixXd::Identity(matrix.size(), matrix.size());
  return stationary_on_class(g, decompose(matrix), matrix.size(), "transition matrix");
}

Eigen::VectorXd stationary_distribution(const RateMatrix& matrix) {
  return stationary_on_class(matrix.to_dense(), decompose(matrix), matrix.size(), "rate matrix");
}

bool in_sa_overlap(const ChainDecomposition& pursuer, const ChainDecomposition& evader) {
  if (!pursuer.is_single_absorbing() || !evader.is_single_absorbing()) return false;
  return in_all_overlap(pursuer, evader);
}

bool in_all_overlap(const ChainDecomposition& pursuer, const ChainDecomposition& evader) {
  for (const CommunicatingClass* a : pursuer.absorbing_classes()) {
    for (const CommunicatingClass* b : evader.absorbing_classes()) {
      if (!intersects(a->nodes, b->nodes) || gcd_int(a->period, b->period) != 1) return false;
    }
  }
  return true;
}

PairClassification classify_pair(const TransitionMatrix& pursuer, const TransitionMatrix& evader,
                                 std::size_t state_budget) {
  return classify_pairs(std::span(&pursuer, 1), std::span(&evader, 1), state_budget);
}

PairClassification classify_tuple(std::span<const TransitionMatrix> pursuers,
                                  std::span<const TransitionMatrix> evaders, std::size_t state_budget) {
  return classify_pairs(pursuers, evaders, state_budget);
}

}  // namespace meetwalk
