#pragma once

#include <utility>

#include "conicgame/solver.hpp"

namespace conicgame {

// Zero-sum game on bases of cones. Player I picks x in
// S = {x in C : <alpha,x> = 1}, player II picks y in T = {y in K : <y,beta> = 1},
// and player I receives u(x,y) = <y, Ax> (player II pays it).
//
// Optional links restrict the strategy cones to C ∩ ker(link_C) and
// K ∩ ker(link_K). For linked games alpha only has to be positive on the
// restricted cone; reference strategies (points of S and T) should then be
// supplied, otherwise one is computed by a solve.
struct ConicGame {
  ConeProduct C;
  ConeProduct K;
  Vector alpha;
  Vector beta;
  LinOp A;
  LinOp link_C;
  LinOp link_K;
  Vector x_ref;  // optional
  Vector y_ref;  // optional

  ConicGame() = default;
  ConicGame(ConeProduct C, ConeProduct K, Vector alpha, Vector beta, LinOp A);

  bool linked() const { return link_C.rows() > 0 || link_K.rows() > 0; }
  // Shapes, interior weights and reference strategies; throws InputError.
  void validate() const;
};

inline constexpr double kStrategyTol = 1e-7;

struct LeveledSpec {
  double p = 1.0;
  double q = 1.0;
};

struct BestResponse {
  double value = 0.0;
  Vector strategy;
};

struct EquilibriumCheck {
  double v_hat = 0.0;
  double residual_I = 0.0;
  double residual_II = 0.0;
  bool ok = false;
};

bool in_base_I(const ConicGame& g, const Eigen::Ref<const Vector>& x, double tol = kStrategyTol);
bool in_base_II(const ConicGame& g, const Eigen::Ref<const Vector>& y, double tol = kStrategyTol);

double payoff(const ConicGame& g, const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y);

// min over T of <y, Ax>; closed form per block, ties to the lowest block and
// coordinate. Linked games fall back to a conic solve.
BestResponse best_response_II(const ConicGame& g, const Eigen::Ref<const Vector>& x);
// max over S of <A*y, x>.
BestResponse best_response_I(const ConicGame& g, const Eigen::Ref<const Vector>& y);

// Largest t with v - t*weight in cone (+ range(link*) when linked), i.e. the
// minimum of <z, v> over the base {z in cone ∩ ker(link) : <z,weight> = 1}.
// Positive exactly when v lies in the interior of the dual cone.
double dual_margin(const ConeProduct& cone, const LinOp& link, const Vector& weight,
                   const Eigen::Ref<const Vector>& v);

Vector reference_strategy_I(const ConicGame& g);
Vector reference_strategy_II(const ConicGame& g);

// (lb, ub) from best responses to the reference strategies.
std::pair<double, double> value_bounds(const ConicGame& g);

EquilibriumCheck verify_equilibrium(const ConicGame& g, const Eigen::Ref<const Vector>& x,
                                    const Eigen::Ref<const Vector>& y, double tol = 1e-6);

// Game on the leveled sets {<alpha,x> in [p_I,q_I]}, {<y,beta> in [p_II,q_II]}
// as a base game: player I sits at level q_I, player II at level p_II.
ConicGame normalize_leveled(const ConicGame& g, const LeveledSpec& spec_I, const LeveledSpec& spec_II);

}  // namespace conicgame
