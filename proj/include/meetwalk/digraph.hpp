#ifndef MEETWALK_DIGRAPH_HPP
#define MEETWALK_DIGRAPH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "meetwalk/matrices.hpp"

namespace meetwalk {

/// Directed weighted edge. Node indices are 0-based inside the library.
struct Edge {
  int source = 0;
  int target = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Node set {0..n-1} with a weighted edge list.
///
/// Edges are kept sorted by (source, target), so two digraphs with the same
/// edge set compare equal regardless of insertion order. Zero or negative
/// weights and duplicate (source, target) pairs are rejected.
class Digraph {
 public:
  Digraph(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(int source, int target) const;
  std::vector<int> out_neighbors(int node) const;
  bool is_symmetric() const;

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  int node_count_;
  std::vector<Edge> edges_;
};

enum class Family { ring, path, star, lollipop, lattice, random_geometric };

Family parse_family(std::string_view name);
std::string_view family_name(Family family);

/// Parameters for `generate`. Optional fields fall back to the documented
/// defaults: lollipop splits n into ceil(n/2) clique nodes plus a tail, and
/// lattice picks the most square factorization rows x cols with rows <= cols.
struct GeneratorParams {
  int n = 0;
  std::optional<int> clique;
  std::optional<int> tail;
  std::optional<int> rows;
  std::optional<int> cols;
  double radius = 0.0;
  std::uint64_t seed = 0;
};

Digraph generate(Family family, const GeneratorParams& params);

Digraph ring_graph(int n);
Digraph path_graph(int n);
/// Node 0 is the center.
Digraph star_graph(int n);
/// Complete graph on the first `clique` nodes; a path of `tail` further nodes
/// hangs off node clique-1.
Digraph lollipop_graph(int clique, int tail);
/// rows x cols grid, 4-neighbor adjacency, node r*cols + c.
Digraph lattice_graph(int rows, int cols);
/// n points uniform in the unit square; edge iff distance <= radius.
Digraph random_geometric_graph(int n, double radius, std::uint64_t seed);

/// Equal-neighbor walk: every out-neighbor (and the node itself when
/// `self_loops` is set) receives probability 1/(outdeg + [self_loops]).
/// Edge weights are ignored. An explicit self-edge is counted once.
TransitionMatrix equal_neighbor_matrix(const Digraph& graph, bool self_loops);

/// Edge weights taken verbatim as transition probabilities.
TransitionMatrix transition_matrix_from_digraph(const Digraph& graph);

/// Off-diagonal rates are the edge weights; self-edges are ignored.
RateMatrix rate_matrix_from_digraph(const Digraph& graph);

/// Digraph whose weights are the positive entries of the matrix
/// (off-diagonal entries only for a rate matrix).
Digraph to_digraph(const TransitionMatrix& matrix);
Digraph to_digraph(const RateMatrix& matrix);

}  // namespace meetwalk

#endif  // MEETWALK_DIGRAPH_HPP
