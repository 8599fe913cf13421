#ifndef MEETWALK_MATRICES_HPP
#define MEETWALK_MATRICES_HPP

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace meetwalk {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Row-stochastic matrix of a discrete-time chain.
///
/// Entries are stored sparsely; an entry is an edge of the support digraph iff
/// it is strictly positive. Construction validates that every entry lies in
/// [0, 1] and every row sums to one within `kRowSumTolerance`.
class TransitionMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  explicit TransitionMatrix(SparseRowMatrix entries);
  explicit TransitionMatrix(const Eigen::MatrixXd& dense);

  static TransitionMatrix identity(int n);

  int size() const { return static_cast<int>(entries_.rows()); }
  const SparseRowMatrix& entries() const { return entries_; }
  double operator()(int row, int col) const { return entries_.coeff(row, col); }
  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(entries_); }

  /// Out-neighbors of every node in the support digraph (self-loops included).
  std::vector<std::vector<int>> support() const;

 private:
  SparseRowMatrix entries_;
};

/// Generator of a continuous-time chain: off-diagonal rates are nonnegative
/// and each diagonal entry is minus the sum of its row's off-diagonal rates.
class RateMatrix {
 public:
  static constexpr double kRowSumTolerance = 1e-12;

  explicit RateMatrix(SparseRowMatrix entries);
  explicit RateMatrix(const Eigen::MatrixXd& dense);

  int size() const { return static_cast<int>(entries_.rows()); }
  const SparseRowMatrix& entries() const { return entries_; }
  double operator()(int row, int col) const { return entries_.coeff(row, col); }
  Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(entries_); }

  /// Total rate of leaving `node`, i.e. -q_{node,node}.
  double exit_rate(int node) const { return -entries_.coeff(node, node); }

  /// Out-neighbors through positive off-diagonal rates.
  std::vector<std::vector<int>> support() const;

  RateMatrix scaled(double factor) const;

 private:
  SparseRowMatrix entries_;
};

}  // namespace meetwalk

#endif  // MEETWALK_MATRICES_HPP
