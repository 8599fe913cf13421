#ifndef MEETWALK_MEETING_RESULT_HPP
#define MEETWALK_MEETING_RESULT_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "meetwalk/product_space.hpp"

namespace meetwalk {

enum class TimeModel { discrete, continuous };

struct SolverOptions {
  std::size_t state_budget = kDefaultStateBudget;
  /// Systems with at most this many unknowns use a dense LU factorization.
  std::size_t dense_limit = 5000;
  /// Relative residual target of the iterative solver.
  double tolerance = 1e-10;
  int max_iterations = 100000;
};

/// Expected meeting time for every start tuple of a product space.
///
/// Infinite entries are carried by a separate mask; `value` returns nullopt
/// for them. Discrete-time values are >= 1 (meeting is counted from t = 1);
/// continuous-time values are 0 on the meeting set.
class MeetingTimeResult {
 public:
  MeetingTimeResult(ProductIndex index, TimeModel model, std::vector<double> values, std::vector<char> finite,
                    double residual, std::string method, int iterations);

  const ProductIndex& index() const { return index_; }
  TimeModel time_model() const { return model_; }
  std::size_t state_count() const { return values_.size(); }

  bool is_finite(std::size_t state) const { return finite_[state] != 0; }
  bool all_finite() const;
  std::optional<double> value(std::size_t state) const;
  std::optional<double> value(std::span<const int> labels) const;

  /// nullopt when some start tuple has an infinite meeting time.
  std::optional<double> max() const;
  /// Largest finite value, or nullopt if none is finite.
  std::optional<double> max_finite() const;

  /// Max-norm residual of the defining linear system over finite states.
  double residual() const { return residual_; }
  const std::string& method() const { return method_; }
  int iterations() const { return iterations_; }

  const std::vector<char>& finite_mask() const { return finite_; }
  FinitenessCertificate certificate() const { return make_certificate(index_, finite_); }

  /// n x n table (pursuer row, evader column) for one pursuer and one evader;
  /// infinite entries become +inf here and only here.
  Eigen::MatrixXd to_matrix() const;

 private:
  ProductIndex index_;
  TimeModel model_;
  std::vector<double> values_;
  std::vector<char> finite_;
  double residual_;
  std::string method_;
  int iterations_;
};

}  // namespace meetwalk

#endif  // MEETWALK_MEETING_RESULT_HPP
