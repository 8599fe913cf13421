#include "meetwalk/matrices.hpp"

#include <cmath>
#include <string>

#include "meetwalk/error.hpp"

namespace meetwalk {
namespace {

SparseRowMatrix pruned(SparseRowMatrix m) {
  m.prune([](int, int, double value) { return value != 0.0; });
  m.makeCompressed();
  return m;
}

void require_square(const SparseRowMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError(std::string(what) + " must be square and nonempty");
  }
}

}  // namespace

TransitionMatrix::TransitionMatrix(SparseRowMatrix entries) : entries_(pruned(std::move(entries))) {
  require_square(entries_, "transition matrix");
  for (int i = 0; i < entries_.outerSize(); ++i) {
    double sum = 0.0;
    for (SparseRowMatrix::InnerIterator it(entries_, i); it; ++it) {
      const double p = it.value();
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("transition probability out of [0,1] at row " + std::to_string(i + 1));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      throw ValidationError("row " + std::to_string(i + 1) + " of transition matrix sums to " +
                            std::to_string(sum));
    }
  }
}

TransitionMatrix::TransitionMatrix(const Eigen::MatrixXd& dense)
    : TransitionMatrix(SparseRowMatrix(dense.sparseView(0.0, 0.0))) {}

TransitionMatrix TransitionMatrix::identity(int n) {
  SparseRowMatrix m(n, n);
  m.setIdentity();
  return TransitionMatrix(std::move(m));
}

std::vector<std::vector<int>> TransitionMatrix::support() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(size()));
  for (int i = 0; i < size(); ++i) {
    for (SparseRowMatrix::InnerIterator it(entries_, i); it; ++it) {
      if (it.value() > 0.0) out[i].push_back(static_cast<int>(it.col()));
    }
  }
  return out;
}

RateMatrix::RateMatrix(SparseRowMatrix entries) : entries_(pruned(std::move(entries))) {
  require_square(entries_, "rate matrix");
  for (int i = 0; i < entries_.outerSize(); ++i) {
    double sum = 0.0;
    double scale = 1.0;
    for (SparseRowMatrix::InnerIterator it(entries_, i); it; ++it) {
      if (it.col() != i && !(it.value() >= 0.0)) {
        throw ValidationError("negative off-diagonal rate at row " + std::to_string(i + 1));
      }
      if (!std::isfinite(it.value())) {
        throw ValidationError("non-finite rate at row " + std::to_string(i + 1));
      }
      sum += it.value();
      scale += std::abs(it.value());
    }
    // Tolerance is relative to the row magnitude so that scaled generators stay valid.
    if (std::abs(sum) > kRowSumTolerance * scale) {
      throw ValidationError("row " + std::to_string(i + 1) + " of rate matrix sums to " +
                            std::to_string(sum));
    }
  }
}

RateMatrix::RateMatrix(const Eigen::MatrixXd& dense)
    : RateMatrix(SparseRowMatrix(dense.sparseView(0.0, 0.0))) {}

std::vector<std::vector<int>> RateMatrix::support() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(size()));
  for (int i = 0; i < size(); ++i) {
    for (SparseRowMatrix::InnerIterator it(entries_, i); it; ++it) {
      if (it.col() != i && it.value() > 0.0) out[i].push_back(static_cast<int>(it.col()));
    }
  }
  return out;
}

RateMatrix RateMatrix::scaled(double factor) const {
  if (!(factor > 0.0)) throw ValidationError("rate scale factor must be positive");
  return RateMatrix(SparseRowMatrix(entries_ * factor));
}

}  // namespace meetwalk
