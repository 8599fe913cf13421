#include "meetwalk/meeting_result.hpp"

#include <algorithm>
#include <limits>

#include "meetwalk/error.hpp"

namespace meetwalk {

MeetingTimeResult::MeetingTimeResult(ProductIndex index, TimeModel model, std::vector<double> values,
                                     std::vector<char> finite, double residual, std::string method, int iterations)
    : index_(index),
      model_(model),
      values_(std::move(values)),
      finite_(std::move(finite)),
      residual_(residual),
      method_(std::move(method)),
      iterations_(iterations) {
  if (values_.size() != index_.state_count() || finite_.size() != index_.state_count()) {
    throw ValidationError("meeting-time result does not match its product space");
  }
}

bool MeetingTimeResult::all_finite() const {
  return std::all_of(finite_.begin(), finite_.end(), [](char f) { return f != 0; });
}

std::optional<double> MeetingTimeResult::value(std::size_t state) const {
  if (state >= values_.size()) throw ValidationError("state index out of range");
  if (!finite_[state]) return std::nullopt;
  return values_[state];
}

std::optional<double> MeetingTimeResult::value(std::span<const int> labels) const {
  return value(index_.flatten(labels));
}

std::optional<double> MeetingTimeResult::max() const {
  if (!all_finite()) return std::nullopt;
  return max_finite();
}

std::optional<double> MeetingTimeResult::max_finite() const {
  std::optional<double> best;
  for (std::size_t s = 0; s < values_.size(); ++s) {
    if (finite_[s] && (!best || values_[s] > *best)) best = values_[s];
  }
  return best;
}

Eigen::MatrixXd MeetingTimeResult::to_matrix() const {
  if (index_.pursuers() != 1 || index_.evaders() != 1) {
    throw ValidationError("matrix view needs exactly one pursuer and one evader");
  }
  const int n = index_.node_count();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto s = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
      m(i, j) = finite_[s] ? values_[s] : std::numeric_limits<double>::infinity();
    }
  }
  return m;
}

}  // namespace meetwalk
