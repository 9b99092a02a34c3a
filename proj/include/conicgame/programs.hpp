#pragma once

#include <vector>

#include "conicgame/cones.hpp"
#include "conicgame/operators.hpp"

namespace conicgame {

// Primal-dual pair of conic linear programs
//
//   (P)  min <c,x>  s.t.  x in C,  Ax - b in K*
//   (D)  max <y,b>  s.t.  y in K,  c - A*y in C*
//
// with K* = K and C* = C under svec coordinates. Optional link operators
// restrict the cones to subspaces, C ∩ ker(link_C) and K ∩ ker(link_K); the
// dual cones then widen to C + range(link_C*) and K + range(link_K*), which
// shows up as free multipliers w (primal) and u (dual):
//
//   (P)  x in C, link_C x = 0, Ax - b + link_K* w in K
//   (D)  y in K, link_K y = 0, c - A*y + link_C* u in C
struct ConicPair {
  ConeProduct C;
  ConeProduct K;
  LinOp A;  // C coordinates -> K coordinates
  Vector b;
  Vector c;
  LinOp link_C;  // 0 rows when C is a plain cone product
  LinOp link_K;

  ConicPair() = default;
  ConicPair(ConeProduct C, ConeProduct K, LinOp A, Vector b, Vector c);

  bool linked() const { return link_C.rows() > 0 || link_K.rows() > 0; }
  // Throws InputError on any shape inconsistency.
  void validate() const;
};

struct CertCheck {
  bool feasible = false;
  bool strictly_feasible = false;
  double objective = 0.0;
  std::vector<double> residuals;  // min eigenvalue per block: C blocks first, then the slack blocks
  double link_residual = 0.0;     // max |link x| (0 without links)
};

inline constexpr double kCertTol = 1e-8;

// w / u are the free link multipliers; empty means zero.
CertCheck check_primal(const ConicPair& pair, const Eigen::Ref<const Vector>& x, double tol = kCertTol,
                       const Vector& w = Vector());
CertCheck check_dual(const ConicPair& pair, const Eigen::Ref<const Vector>& y, double tol = kCertTol,
                     const Vector& u = Vector());

// Conic slack of the primal constraint, Ax - b + link_K* w.
Vector primal_slack(const ConicPair& pair, const Eigen::Ref<const Vector>& x, const Vector& w = Vector());
// Conic slack of the dual constraint, c - A*y + link_C* u.
Vector dual_slack(const ConicPair& pair, const Eigen::Ref<const Vector>& y, const Vector& u = Vector());

// <c,x> - <y,b>; rejects points that are not feasible at tol.
double duality_gap(const ConicPair& pair, const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                   double tol = 1e-7, const Vector& w = Vector(), const Vector& u = Vector());

// Both complementarity pairings vanish (relative to 1 + max-norm of the data
// and points); when true, x and y are optimal and val(P) = val(D).
bool complementary_slackness(const ConicPair& pair, const Eigen::Ref<const Vector>& x,
                             const Eigen::Ref<const Vector>& y, double tol = 1e-7, const Vector& w = Vector(),
                             const Vector& u = Vector());

// 1 + max |entry| over the given vectors.
double tolerance_scale(std::initializer_list<const Vector*> vs);

}  // namespace conicgame
