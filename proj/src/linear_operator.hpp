#ifndef MEETWALK_SRC_LINEAR_OPERATOR_HPP
#define MEETWALK_SRC_LINEAR_OPERATOR_HPP

#include <functional>
#include <span>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

namespace meetwalk::detail {
class LinearOperator;
}  // namespace meetwalk::detail

namespace Eigen::internal {
template <>
struct traits<meetwalk::detail::LinearOperator> : public traits<SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace meetwalk::detail {

/// Square operator known only through its action y = A x, for Eigen's
/// iterative solvers.
class LinearOperator : public Eigen::EigenBase<LinearOperator> {
 public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

  using Action = std::function<void(std::span<const double>, std::span<double>)>;

  LinearOperator(Eigen::Index size, Action action) : size_(size), action_(std::move(action)) {}

  Eigen::Index rows() const { return size_; }
  Eigen::Index cols() const { return size_; }

  template <typename Rhs>
  Eigen::Product<LinearOperator, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<LinearOperator, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  void apply(std::span<const double> x, std::span<double> y) const { action_(x, y); }

 private:
  Eigen::Index size_;
  Action action_;
};

}  // namespace meetwalk::detail

namespace Eigen::internal {

template <typename Rhs>
struct generic_product_impl<meetwalk::detail::LinearOperator, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<meetwalk::detail::LinearOperator, Rhs,
                                generic_product_impl<meetwalk::detail::LinearOperator, Rhs>> {
  using Scalar = typename Product<meetwalk::detail::LinearOperator, Rhs>::Scalar;

  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const meetwalk::detail::LinearOperator& lhs, const Rhs& rhs,
                            const Scalar& alpha) {
    const Eigen::VectorXd x = rhs;
    Eigen::VectorXd y(x.size());
    lhs.apply(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
              std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
    dst.noalias() += alpha * y;
  }
};

}  // namespace Eigen::internal

#endif  // MEETWALK_SRC_LINEAR_OPERATOR_HPP
