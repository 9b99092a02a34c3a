#include "conicgame/instances.hpp"

#include <cmath>
#include <string>

namespace conicgame {

namespace {

// svec position and the factor turning the coordinate into the matrix entry.
Eigen::Index svec_index(int k, int i, int j) {
  if (i > j) std::swap(i, j);
  return static_cast<Eigen::Index>(i) * k - static_cast<Eigen::Index>(i) * (i - 1) / 2 + (j - i);
}

double entry_factor(int i, int j) { return i == j ? 1.0 : 1.0 / std::sqrt(2.0); }

}  // namespace

ConicGame matrix_game(const Matrix& R) {
  if (R.rows() == 0 || R.cols() == 0) throw InputError("matrix game: empty payoff matrix");
  if (!R.allFinite()) throw InputError("matrix game: non-finite payoff");
  const auto m = R.rows();
  const auto n = R.cols();
  return ConicGame(ConeProduct::orthant(static_cast<int>(m)), ConeProduct::orthant(static_cast<int>(n)),
                   Vector::Ones(m), Vector::Ones(n), LinOp(RowMatrix(R.transpose())));
}

ConicGame sdp_game(const std::vector<double>& tensor, int m, int n) {
  if (m < 1 || n < 1) throw InputError("sdp game: sides must be positive");
  const std::size_t need = static_cast<std::size_t>(m) * m * n * n;
  if (tensor.size() != need) {
    throw InputError("sdp game: tensor needs " + std::to_string(need) + " entries, got " +
                     std::to_string(tensor.size()));
  }
  auto at = [&](int i, int j, int k, int l) { return tensor[((static_cast<std::size_t>(i) * m + j) * n + k) * n + l]; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double t = at(i, j, k, l);
          if (!std::isfinite(t)) throw InputError("sdp game: non-finite tensor entry");
          const double tol = 1e-12 * (1.0 + std::abs(t));
          if (std::abs(t - at(j, i, k, l)) > tol || std::abs(t - at(i, j, l, k)) > tol) {
            throw InputError("sdp game: tensor is not symmetric in (i,j) and (k,l)");
          }
        }
  const auto C = ConeProduct::psd(m);
  const auto K = ConeProduct::psd(n);
  RowMatrix A(K.total_dim(), C.total_dim());
  Vector e = Vector::Zero(C.total_dim());
  for (Eigen::Index p = 0; p < C.total_dim(); ++p) {
    e.setZero();
    e(p) = 1.0;
    const Matrix X = smat(e);
    Matrix M = Matrix::Zero(n, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (X(i, j) == 0.0) continue;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) M(k, l) += X(i, j) * at(i, j, k, l);
      }
    A.col(p) = svec(M);
  }
  return ConicGame(C, K, canonical_interior(C), canonical_interior(K), LinOp(std::move(A)));
}

Matrix hankel(const Eigen::Ref<const Vector>& a) {
  if (a.size() == 0 || a.size() % 2 == 0) throw InputError("hankel: input length must be odd");
  const Eigen::Index k = (a.size() + 1) / 2;
  Matrix H(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) H(i, j) = a(i + j);
  return H;
}

Vector hankel_adjoint(const Matrix& B) {
  if (B.rows() != B.cols() || B.rows() == 0) throw InputError("hankel_adjoint: matrix must be square");
  const Eigen::Index k = B.rows();
  Vector out = Vector::Zero(2 * k - 1);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) out(i + j) += B(i, j);
  return out;
}

MomentLift::MomentLift(int deg) : degree(deg), cone(ConeProduct::psd(1)) {
  if (deg < 0 || deg % 2 != 0) throw InputError("moment lift: degree must be even and non-negative");
  const int d = deg / 2;
  std::vector<ConeBlock> blocks{ConeBlock::psd(d + 1)};
  if (d > 0) blocks.push_back(ConeBlock::psd(d));
  cone = ConeProduct(blocks);
  const Eigen::Index dim = cone.total_dim();
  const Eigen::Index loc_off = d > 0 ? cone.offset(1) : dim;
  const int kh = d + 1;

  // Positions (i <= j) of the Hankel block on each antidiagonal.
  std::vector<std::vector<std::pair<int, int>>> diag(static_cast<std::size_t>(deg + 1));
  for (int i = 0; i < kh; ++i)
    for (int j = i; j < kh; ++j) diag[static_cast<std::size_t>(i + j)].emplace_back(i, j);

  std::vector<Vector> rows;
  auto h_entry = [&](Vector& row, int i, int j, double sign) { row(svec_index(kh, i, j)) += sign * entry_factor(i, j); };
  for (const auto& positions : diag) {
    for (std::size_t t = 1; t < positions.size(); ++t) {
      Vector row = Vector::Zero(dim);
      h_entry(row, positions[t - 1].first, positions[t - 1].second, 1.0);
      h_entry(row, positions[t].first, positions[t].second, -1.0);
      rows.push_back(row);
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      Vector row = Vector::Zero(dim);
      row(loc_off + svec_index(d, i, j)) = entry_factor(i, j);
      const auto& lo = diag[static_cast<std::size_t>(i + j)].front();
      const auto& hi = diag[static_cast<std::size_t>(i + j + 2)].front();
      h_entry(row, lo.first, lo.second, -1.0);
      h_entry(row, hi.first, hi.second, 1.0);
      rows.push_back(row);
    }
  RowMatrix L(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) L.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
  link = LinOp(std::move(L));

  RowMatrix R = RowMatrix::Zero(deg + 1, dim);
  for (int s = 0; s <= deg; ++s) {
    const auto& positions = diag[static_cast<std::size_t>(s)];
    for (const auto& [i, j] : positions) {
      R(s, svec_index(kh, i, j)) = entry_factor(i, j) / static_cast<double>(positions.size());
    }
  }
  to_moments = LinOp(std::move(R));

  weight = Vector::Zero(dim);
  weight.head(svec_index(kh, kh - 1, kh - 1) + 1) = svec(Matrix::Identity(kh, kh) / kh);
  if (d > 0) {
    Vector w(d);
    for (int k = 0; k < d; ++k) w(k) = static_cast<double>(d - k) / kh;
    weight.tail(dim - loc_off) = svec(Matrix(w.asDiagonal()));
  }
}

Vector MomentLift::lift(const Eigen::Ref<const Vector>& mu) const {
  if (mu.size() != degree + 1) throw InputError("moment lift: wrong number of moments");
  const int d = degree / 2;
  const Matrix H = hankel(mu);
  Vector out(cone.total_dim());
  out.head(H.rows() * (H.rows() + 1) / 2) = svec(H);
  if (d > 0) {
    const Matrix Loc = H.topLeftCorner(d, d) - H.bottomRightCorner(d, d);
    out.tail(d * (d + 1) / 2) = svec(Loc);
  }
  return out;
}

Vector uniform_moments(int degree) {
  Vector mu = Vector::Zero(degree + 1);
  for (int k = 0; k <= degree; k += 2) mu(k) = 1.0 / (k + 1);
  return mu;
}

ConicGame polynomial_game(const Matrix& p) {
  const auto m = static_cast<int>(p.rows()) - 1;
  const auto n = static_cast<int>(p.cols()) - 1;
  if (m < 0 || n < 0) throw InputError("polynomial game: empty coefficient matrix");
  if (m % 2 != 0 || n % 2 != 0) throw InputError("polynomial game: degrees must be even");
  if (!p.allFinite()) throw InputError("polynomial game: non-finite coefficient");
  const MomentLift lx(m);
  const MomentLift ly(n);
  RowMatrix A = ly.to_moments.matrix().transpose() * p.transpose() * lx.to_moments.matrix();
  ConicGame g;
  g.C = lx.cone;
  g.K = ly.cone;
  g.alpha = lx.weight;
  g.beta = ly.weight;
  g.A = LinOp(std::move(A));
  g.link_C = lx.link;
  g.link_K = ly.link;
  g.x_ref = lx.lift(uniform_moments(m));
  g.y_ref = ly.lift(uniform_moments(n));
  g.validate();
  return g;
}

Example44 example44(Example44Variant variant, double param) {
  Matrix A1(3, 3);
  A1 << 0, 1, 0, 1, 0, 0, 0, 0, -1;
  Matrix A2 = Matrix::Zero(3, 3);
  A2(1, 1) = 1;
  RowMatrix A(6, 2);
  A.col(0) = svec(A1);
  A.col(1) = svec(A2);
  Matrix B = Matrix::Zero(3, 3);
  B(1, 1) = -1;
  B(2, 2) = -1;
  Vector c(2);
  c << -1, 0;
  switch (variant) {
    case Example44Variant::Original:
      break;
    case Example44Variant::Rho:
      if (!(param >= 0.0) || !std::isfinite(param)) throw InputError("example44: rho must be >= 0");
      c << param, 0;
      break;
    case Example44Variant::Sigma:
      if (!(param >= 0.5 && param <= 1.0)) throw InputError("example44: sigma must lie in [1/2, 1]");
      B(0, 1) = B(1, 0) = param;
      break;
  }
  const auto C = ConeProduct::orthant(2);
  const auto K = ConeProduct::psd(3);
  LinOp op(std::move(A));
  return {ConicGame(C, K, Vector::Ones(2), svec(Matrix::Identity(3, 3)), op), ConicPair(C, K, op, svec(B), c)};
}

}  // namespace conicgame
