#pragma once

#include <string>
#include <vector>

#include "conicgame/game.hpp"

namespace conicgame {

// Player I (rows) maximizes x'Ry over the simplex; A = R'.
ConicGame matrix_game(const Matrix& R);

// u(X,Y) = sum_ijkl X_ij T_ijkl Y_kl over the spectraplexes of side m and n.
// tensor is flat with index ((i*m + j)*n + k)*n + l and must satisfy
// T_ijkl = T_jikl = T_ijlk.
ConicGame sdp_game(const std::vector<double>& tensor, int m, int n);

// a of length 2k-1 -> k x k matrix with entries a_{i+j} (0-based).
Matrix hankel(const Eigen::Ref<const Vector>& a);
// Sums along antidiagonals; adjoint of hankel under the Frobenius product.
Vector hankel_adjoint(const Matrix& B);

// Moment vectors (mu_0..mu_m) of measures on [-1,1], m even, lifted to the
// PSD pair (H(mu), H_loc(mu)) with H_loc = M1'H(mu)M1 - M2'H(mu)M2 and linked
// so that only lifted moment vectors remain.
struct MomentLift {
  int degree = 0;
  ConeProduct cone;
  LinOp link;     // kernel = lifted moment vectors
  LinOp to_moments;  // lifted point -> mu (antidiagonal averages)
  Vector weight;  // interior, equals mu_0 on the kernel of link

  explicit MomentLift(int degree);
  Vector lift(const Eigen::Ref<const Vector>& mu) const;
  Vector moments(const Eigen::Ref<const Vector>& lifted) const { return to_moments.apply(lifted); }
};

// Moments of the uniform probability measure on [-1,1].
Vector uniform_moments(int degree);

// P(x,y) = sum_ij p(i,j) x^i y^j on [-1,1]^2; p is (m+1) x (n+1), m and n even.
ConicGame polynomial_game(const Matrix& p);

enum class Example44Variant { Original, Rho, Sigma };

struct Example44 {
  ConicGame game;
  ConicPair pair;
};

// Original: c = (-1,0), B = diag(0,-1,-1). Rho: c = (rho,0), rho >= 0.
// Sigma: B with off-diagonal sigma in entry (1,2), sigma in [1/2,1].
Example44 example44(Example44Variant variant, double param = 0.0);

}  // namespace conicgame
