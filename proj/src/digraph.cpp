#include "meetwalk/digraph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "meetwalk/error.hpp"

namespace meetwalk {
namespace {

void add_undirected(std::vector<Edge>& edges, int a, int b) {
  edges.push_back({a, b, 1.0});
  edges.push_back({b, a, 1.0});
}

void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace

Digraph::Digraph(int node_count, std::vector<Edge> edges) : node_count_(node_count), edges_(std::move(edges)) {
  require(node_count_ >= 1, "digraph needs at least one node");
  for (const Edge& e : edges_) {
    require(e.source >= 0 && e.source < node_count_ && e.target >= 0 && e.target < node_count_,
            "edge (" + std::to_string(e.source + 1) + "," + std::to_string(e.target + 1) +
                ") has a node outside [1, " + std::to_string(node_count_) + "]");
    require(std::isfinite(e.weight) && e.weight > 0.0,
            "edge (" + std::to_string(e.source + 1) + "," + std::to_string(e.target + 1) +
                ") must have a positive weight");
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.source, a.target) < std::pair(b.source, b.target);
  });
  auto dup = std::adjacent_find(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.source == b.source && a.target == b.target;
  });
  require(dup == edges_.end(), "duplicate edge (" + (dup == edges_.end() ? std::string() :
                                   std::to_string(dup->source + 1) + "," + std::to_string(dup->target + 1)) + ")");
}

bool Digraph::has_edge(int source, int target) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{source, target, 0.0},
                            [](const Edge& a, const Edge& b) {
                              return std::pair(a.source, a.target) < std::pair(b.source, b.target);
                            });
}

std::vector<int> Digraph::out_neighbors(int node) const {
  std::vector<int> out;
  for (const Edge& e : edges_) {
    if (e.source == node) out.push_back(e.target);
  }
  return out;
}

bool Digraph::is_symmetric() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [this](const Edge& e) { return has_edge(e.target, e.source); });
}

Family parse_family(std::string_view name) {
  if (name == "ring") return Family::ring;
  if (name == "path") return Family::path;
  if (name == "star") return Family::star;
  if (name == "lollipop") return Family::lollipop;
  if (name == "lattice") return Family::lattice;
  if (name == "random_geometric" || name == "rgg") return Family::random_geometric;
  throw ValidationError("unknown graph family '" + std::string(name) + "'");
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::ring: return "ring";
    case Family::path: return "path";
    case Family::star: return "star";
    case Family::lollipop: return "lollipop";
    case Family::lattice: return "lattice";
    case Family::random_geometric: return "random_geometric";
  }
  return "unknown";
}

Digraph ring_graph(int n) {
  require(n >= 1, "ring needs n >= 1");
  std::vector<Edge> edges;
  if (n == 2) {
    add_undirected(edges, 0, 1);
  } else if (n > 2) {
    for (int i = 0; i < n; ++i) add_undirected(edges, i, (i + 1) % n);
  }
  return Digraph(n, std::move(edges));
}

Digraph path_graph(int n) {
  require(n >= 1, "path needs n >= 1");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) add_undirected(edges, i, i + 1);
  return Digraph(n, std::move(edges));
}

Digraph star_graph(int n) {
  require(n >= 1, "star needs n >= 1");
  std::vector<Edge> edges;
  for (int i = 1; i < n; ++i) add_undirected(edges, 0, i);
  return Digraph(n, std::move(edges));
}

Digraph lollipop_graph(int clique, int tail) {
  require(clique >= 1, "lollipop clique size must be >= 1");
  require(tail >= 0, "lollipop tail length must be >= 0");
  std::vector<Edge> edges;
  for (int i = 0; i < clique; ++i) {
    for (int j = i + 1; j < clique; ++j) add_undirected(edges, i, j);
  }
  for (int k = 0; k < tail; ++k) add_undirected(edges, clique - 1 + k, clique + k);
  return Digraph(clique + tail, std::move(edges));
}

Digraph lattice_graph(int rows, int cols) {
  require(rows >= 1 && cols >= 1, "lattice needs rows, cols >= 1");
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int u = r * cols + c;
      if (c + 1 < cols) add_undirected(edges, u, u + 1);
      if (r + 1 < rows) add_undirected(edges, u, u + cols);
    }
  }
  return Digraph(rows * cols, std::move(edges));
}

Digraph random_geometric_graph(int n, double radius, std::uint64_t seed) {
  require(n >= 1, "random geometric graph needs n >= 1");
  require(radius > 0.0 && radius <= std::sqrt(2.0), "radius must lie in (0, sqrt(2)]");
  std::mt19937_64 engine(seed);
  // 53-bit conversion keeps point coordinates identical across standard libraries.
  auto uniform = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  std::vector<std::pair<double, double>> points(static_cast<std::size_t>(n));
  for (auto& [x, y] : points) {
    x = uniform();
    y = uniform();
  }
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = points[i].first - points[j].first;
      const double dy = points[i].second - points[j].second;
      if (std::hypot(dx, dy) <= radius) add_undirected(edges, i, j);
    }
  }
  return Digraph(n, std::move(edges));
}

Digraph generate(Family family, const GeneratorParams& params) {
  switch (family) {
    case Family::ring: return ring_graph(params.n);
    case Family::path: return path_graph(params.n);
    case Family::star: return star_graph(params.n);
    case Family::lollipop: {
      int clique = params.clique.value_or(-1);
      int tail = params.tail.value_or(-1);
      if (!params.clique && !params.tail) {
        require(params.n >= 1, "lollipop needs n or clique/tail");
        clique = (params.n + 1) / 2;
        tail = params.n - clique;
      } else if (!params.tail) {
        tail = params.n - clique;
      } else if (!params.clique) {
        clique = params.n - tail;
      }
      require(params.n == 0 || clique + tail == params.n, "lollipop clique + tail must equal n");
      return lollipop_graph(clique, tail);
    }
    case Family::lattice: {
      int rows = params.rows.value_or(0);
      int cols = params.cols.value_or(0);
      if (!params.rows && !params.cols) {
        require(params.n >= 1, "lattice needs n or rows/cols");
        rows = static_cast<int>(std::sqrt(static_cast<double>(params.n)));
        while (params.n % rows != 0) --rows;
        cols = params.n / rows;
      } else if (!params.cols) {
        require(rows >= 1 && params.n % rows == 0, "lattice rows must divide n");
        cols = params.n / rows;
      } else if (!params.rows) {
        require(cols >= 1 && params.n % cols == 0, "lattice cols must divide n");
        rows = params.n / cols;
      }
      require(params.n == 0 || rows * cols == params.n, "lattice rows * cols must equal n");
      return lattice_graph(rows, cols);
    }
    case Family::random_geometric:
      return random_geometric_graph(params.n, params.radius, params.seed);
  }
  throw ValidationError("unknown graph family");
}

TransitionMatrix equal_neighbor_matrix(const Digraph& graph, bool self_loops) {
  const int n = graph.node_count();
  std::vector<std::vector<int>> targets(static_cast<std::size_t>(n));
  for (const Edge& e : graph.edges()) {
    if (e.source != e.target) targets[e.source].push_back(e.target);
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < n; ++i) {
    if (self_loops || graph.has_edge(i, i)) targets[i].push_back(i);
    if (targets[i].empty()) {
      throw ValidationError("zero out-degree row at node " + std::to_string(i + 1));
    }
    const double p = 1.0 / static_cast<double>(targets[i].size());
    for (int j : targets[i]) triplets.emplace_back(i, j, p);
  }
  SparseRowMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return TransitionMatrix(std::move(m));
}

TransitionMatrix transition_matrix_from_digraph(const Digraph& graph) {
  const int n = graph.node_count();
  std::vector<Eigen::Triplet<double>> triplets;
  for (const Edge& e : graph.edges()) triplets.emplace_back(e.source, e.target, e.weight);
  SparseRowMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return TransitionMatrix(std::move(m));
}

RateMatrix rate_matrix_from_digraph(const Digraph& graph) {
  const int n = graph.node_count();
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<double> exit(static_cast<std::size_t>(n), 0.0);
  for (const Edge& e : graph.edges()) {
    if (e.source == e.target) continue;
    triplets.emplace_back(e.source, e.target, e.weight);
    exit[e.source] += e.weight;
  }
  for (int i = 0; i < n; ++i) {
    if (exit[i] > 0.0) triplets.emplace_back(i, i, -exit[i]);
  }
  SparseRowMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return RateMatrix(std::move(m));
}

namespace {

Digraph digraph_from_entries(const SparseRowMatrix& m, bool skip_diagonal) {
  std::vector<Edge> edges;
  for (int i = 0; i < m.outerSize(); ++i) {
    for (SparseRowMatrix::InnerIterator it(m, i); it; ++it) {
      if (skip_diagonal && it.col() == i) continue;
      if (it.value() > 0.0) edges.push_back({i, static_cast<int>(it.col()), it.value()});
    }
  }
  return Digraph(static_cast<int>(m.rows()), std::move(edges));
}

}  // namespace

Digraph to_digraph(const TransitionMatrix& matrix) { return digraph_from_entries(matrix.entries(), false); }
Digraph to_digraph(const RateMatrix& matrix) { return digraph_from_entries(matrix.entries(), true); }

}  // namespace meetwalk
