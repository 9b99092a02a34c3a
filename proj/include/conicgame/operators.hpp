#pragma once

#include <vector>

#include "conicgame/cones.hpp"

namespace conicgame {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense linear map between cone coordinate spaces (rows = codomain dimension,
// cols = domain dimension). The adjoint is the transpose because both spaces
// use svec coordinates.
class LinOp {
 public:
  LinOp() = default;
  LinOp(Eigen::Index rows, Eigen::Index cols) : data_(RowMatrix::Zero(rows, cols)) {}
  explicit LinOp(RowMatrix data) : data_(std::move(data)) {}
  LinOp(Eigen::Index rows, Eigen::Index cols, const std::vector<double>& row_major);

  static LinOp identity(Eigen::Index n) { return LinOp(RowMatrix::Identity(n, n)); }

  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index cols() const { return data_.cols(); }
  const RowMatrix& matrix() const { return data_; }
  RowMatrix& matrix() { return data_; }
  double operator()(Eigen::Index r, Eigen::Index c) const { return data_(r, c); }

  Vector apply(const Eigen::Ref<const Vector>& x) const;
  Vector adjoint_apply(const Eigen::Ref<const Vector>& y) const;
  LinOp adjoint() const { return LinOp(RowMatrix(data_.transpose())); }

  friend bool operator==(const LinOp& a, const LinOp& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a.data_ == b.data_;
  }

 private:
  RowMatrix data_;
};

// Coordinate inner product, routed through the dispatched kernels.
double dot(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

// Rank-one shift x -> beta * <alpha, x>.
LinOp make_E(const Eigen::Ref<const Vector>& alpha, const Eigen::Ref<const Vector>& beta);

// lambda * A + kappa * E, entrywise.
LinOp combine(double lambda, const LinOp& a, double kappa, const LinOp& e);

}  // namespace conicgame
