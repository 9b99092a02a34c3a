#include "conicgame/operators.hpp"

#include <string>

#include "conicgame/kernels.hpp"

namespace conicgame {

LinOp::LinOp(Eigen::Index rows, Eigen::Index cols, const std::vector<double>& row_major) {
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != row_major.size()) {
    throw InputError("operator data has " + std::to_string(row_major.size()) + " entries, expected " +
                     std::to_string(rows * cols));
  }
  data_ = Eigen::Map<const RowMatrix>(row_major.data(), rows, cols);
}

Vector LinOp::apply(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != cols()) {
    throw InputError("apply: operand has dimension " + std::to_string(x.size()) + ", operator expects " +
                     std::to_string(cols()));
  }
  Vector y(rows());
  if (rows() == 0) return y;
  kernels::active().gemv(data_.data(), static_cast<std::size_t>(rows()), static_cast<std::size_t>(cols()), x.data(),
                         y.data());
  return y;
}

Vector LinOp::adjoint_apply(const Eigen::Ref<const Vector>& y) const {
  if (y.size() != rows()) {
    throw InputError("adjoint_apply: operand has dimension " + std::to_string(y.size()) + ", operator expects " +
                     std::to_string(rows()));
  }
  Vector x(cols());
  if (cols() == 0) return x;
  if (rows() == 0) return Vector::Zero(cols());
  kernels::active().gemv_t(data_.data(), static_cast<std::size_t>(rows()), static_cast<std::size_t>(cols()), y.data(),
                           x.data());
  return x;
}

double dot(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) throw InputError("dot: dimension mismatch");
  return kernels::active().dot(a.data(), b.data(), static_cast<std::size_t>(a.size()));
}

LinOp make_E(const Eigen::Ref<const Vector>& alpha, const Eigen::Ref<const Vector>& beta) {
  return LinOp(RowMatrix(beta * alpha.transpose()));
}

LinOp combine(double lambda, const LinOp& a, double kappa, const LinOp& e) {
  if (a.rows() != e.rows() || a.cols() != e.cols()) throw InputError("combine: operator shapes differ");
  return LinOp(RowMatrix(lambda * a.matrix() + kappa * e.matrix()));
}

}  // namespace conicgame
