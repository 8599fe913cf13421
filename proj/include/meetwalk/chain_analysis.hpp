#ifndef MEETWALK_CHAIN_ANALYSIS_HPP
#define MEETWALK_CHAIN_ANALYSIS_HPP

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "meetwalk/matrices.hpp"
#include "meetwalk/product_space.hpp"

namespace meetwalk {

enum class ClassKind { absorbing, transient };

struct CommunicatingClass {
  std::vector<int> nodes;  // sorted, 0-based
  ClassKind kind = ClassKind::transient;
  /// gcd of closed-walk lengths; 1 for a lone node without a self-loop.
  int period = 1;
};

/// Communicating classes of a chain, i.e. the strongly connected components
/// of its support digraph, labelled absorbing (closed) or transient.
struct ChainDecomposition {
  int node_count = 0;
  std::vector<CommunicatingClass> classes;
  std::vector<int> class_of;  // node -> index into classes

  std::vector<const CommunicatingClass*> absorbing_classes() const;
  bool is_single_absorbing() const;
  bool is_irreducible() const { return classes.size() == 1; }
  /// Irreducible and aperiodic.
  bool is_ergodic() const { return is_irreducible() && classes.front().period == 1; }
};

/// Decomposition of an arbitrary support digraph given as adjacency lists.
ChainDecomposition decompose(const std::vector<std::vector<int>>& adjacency);
ChainDecomposition decompose(const TransitionMatrix& matrix);
/// Continuous-time chains have no periodicity; every period is reported as 1.
ChainDecomposition decompose(const RateMatrix& matrix);

/// Unique stationary distribution of a single-absorbing chain. Transient
/// nodes get probability zero. Throws ValidationError when the chain has more
/// than one absorbing class.
Eigen::VectorXd stationary_distribution(const TransitionMatrix& matrix);
Eigen::VectorXd stationary_distribution(const RateMatrix& matrix);

/// Membership of a pursuer/evader pair (or tuple) in the nested sets of
/// sufficient conditions for finite meeting times.
struct PairClassification {
  bool one_ergodic = false;
  bool sa_overlap = false;
  bool all_overlap = false;
  bool finite = false;
  /// A start tuple (0-based, pursuers first) from which no meeting is possible.
  std::optional<std::vector<int>> witness;
};

/// Both chains single-absorbing, absorbing classes intersecting, coprime periods.
bool in_sa_overlap(const ChainDecomposition& pursuer, const ChainDecomposition& evader);
/// Every absorbing-class pair intersects and has coprime periods.
bool in_all_overlap(const ChainDecomposition& pursuer, const ChainDecomposition& evader);

PairClassification classify_pair(const TransitionMatrix& pursuer, const TransitionMatrix& evader,
                                 std::size_t state_budget = kDefaultStateBudget);

/// Tuple flags: sa/all-overlap hold when every pursuer chain forms such a
/// pair with at least one evader chain; one-ergodic when any chain is ergodic;
/// finite is decided on the joint product space.
PairClassification classify_tuple(std::span<const TransitionMatrix> pursuers,
                                  std::span<const TransitionMatrix> evaders,
                                  std::size_t state_budget = kDefaultStateBudget);

}  // namespace meetwalk

#endif  // MEETWALK_CHAIN_ANALYSIS_HPP
