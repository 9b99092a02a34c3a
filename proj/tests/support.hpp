#pragma once

#include <cmath>
#include <random>

#include "conicgame/diagnosis.hpp"
#include "conicgame/instances.hpp"

namespace support {

using namespace conicgame;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Matrix random_sym(Rng& rng, int m) {
  Matrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = uniform(rng);
  return 0.5 * (a + a.transpose());
}

inline Vector random_vector(Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(rng);
  return v;
}

inline LinOp random_op(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  RowMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = uniform(rng);
  return LinOp(std::move(m));
}

// 1 to 3 blocks: orthants of size 1..3 and PSD of side 1..3.
inline ConeProduct random_cones(Rng& rng, int kinds = 2) {
  std::vector<ConeBlock> blocks;
  const int nb = uniform_int(rng, 1, 3);
  for (int i = 0; i < nb; ++i) {
    const bool psd = kinds == 1 ? true : kinds == 0 ? false : uniform_int(rng, 0, 1) == 1;
    blocks.push_back(psd ? ConeBlock::psd(uniform_int(rng, 1, 3)) : ConeBlock::orthant(uniform_int(rng, 1, 3)));
  }
  return ConeProduct(std::move(blocks));
}

// Cone point; eigenvalues drawn from [floor, 1], with a random number forced
// to zero when boundary is set.
inline Vector random_cone_point(Rng& rng, const ConeProduct& k, double floor = 0.05, bool boundary = false) {
  Vector v(k.total_dim());
  for (std::size_t b = 0; b < k.blocks().size(); ++b) {
    const ConeBlock& blk = k.blocks()[b];
    Vector eig(blk.size);
    for (int i = 0; i < blk.size; ++i) eig(i) = uniform(rng, floor, 1.0);
    if (boundary) eig(uniform_int(rng, 0, blk.size - 1)) = 0.0;
    if (blk.kind == BlockKind::Orthant) {
      v.segment(k.offset(b), blk.dim()) = eig;
    } else {
      Eigen::HouseholderQR<Matrix> qr(random_sym(rng, blk.size) + Matrix::Identity(blk.size, blk.size) * 0.1);
      const Matrix q = qr.householderQ();
      const Matrix m = q * eig.asDiagonal() * q.transpose();
      v.segment(k.offset(b), blk.dim()) = svec(0.5 * (m + m.transpose()));
    }
  }
  return v;
}

inline ConicGame random_game(Rng& rng, int kinds = 2, bool random_weights = false) {
  const ConeProduct C = random_cones(rng, kinds);
  const ConeProduct K = random_cones(rng, kinds);
  Vector alpha = random_weights ? random_cone_point(rng, C, 0.3) : canonical_interior(C);
  Vector beta = random_weights ? random_cone_point(rng, K, 0.3) : canonical_interior(K);
  ConicGame g(C, K, alpha, beta, random_op(rng, K.total_dim(), C.total_dim()));
  g.validate();
  return g;
}

// b = A x0 - s0 and c = A* y0 + t0 around chosen x0, s0, y0, t0. Interior
// choices give a strictly feasible pair; boundary ones a merely feasible one.
inline ConicPair pair_around(const ConeProduct& C, const ConeProduct& K, const LinOp& A, const Vector& x0,
                             const Vector& s0, const Vector& y0, const Vector& t0) {
  return ConicPair(C, K, A, A.apply(x0) - s0, A.adjoint_apply(y0) + t0);
}

struct PairWithPoints {
  ConicPair pair;
  Vector x0, y0;
};

inline PairWithPoints random_pair(Rng& rng, bool strict, int kinds = 2) {
  const ConeProduct C = random_cones(rng, kinds);
  const ConeProduct K = random_cones(rng, kinds);
  const LinOp A = random_op(rng, K.total_dim(), C.total_dim());
  const double floor = strict ? 0.05 : 0.0;
  const Vector x0 = random_cone_point(rng, C, floor, !strict);
  const Vector s0 = random_cone_point(rng, K, floor, !strict);
  const Vector y0 = random_cone_point(rng, K, floor, !strict);
  const Vector t0 = random_cone_point(rng, C, floor, !strict);
  return {pair_around(C, K, A, x0, s0, y0, t0), x0, y0};
}

inline double scale_of(double a, double b = 0.0) { return 1.0 + std::abs(a) + std::abs(b); }

// Lower and upper values of max_x min_y x'Ry over a grid of the 2-simplex on
// both sides.
inline std::pair<double, double> grid_value_2x2(const Matrix& R, double step) {
  const int n = static_cast<int>(std::round(1.0 / step));
  auto point = [&](int i) {
    Vector v(2);
    v << i * step, 1.0 - i * step;
    return v;
  };
  double lower = -1e300, upper = 1e300;
  for (int i = 0; i <= n; ++i) {
    double worst = 1e300, best = -1e300;
    for (int j = 0; j <= n; ++j) {
      worst = std::min(worst, point(i).dot(R * point(j)));
      best = std::max(best, point(j).dot(R * point(i)));
    }
    lower = std::max(lower, worst);
    upper = std::min(upper, best);
  }
  return {lower, upper};
}

// max_x min_y and min_y max_x of P(x,y) over a grid on [-1,1]^2.
template <class F>
std::pair<double, double> grid_value_interval(F P, double step) {
  const int n = static_cast<int>(std::round(2.0 / step));
  double lower = -1e300, upper = 1e300;
  for (int i = 0; i <= n; ++i) {
    const double x = -1.0 + i * step;
    double worst = 1e300;
    for (int j = 0; j <= n; ++j) worst = std::min(worst, P(x, -1.0 + j * step));
    lower = std::max(lower, worst);
  }
  for (int j = 0; j <= n; ++j) {
    const double y = -1.0 + j * step;
    double best = -1e300;
    for (int i = 0; i <= n; ++i) best = std::max(best, P(-1.0 + i * step, y));
    upper = std::min(upper, best);
  }
  return {lower, upper};
}

}  // namespace support
