#pragma once

#include "conicgame/game.hpp"

namespace conicgame {

struct ReductionParams {
  double lambda = 1.0;
  double kappa = 0.75;
};

struct GameSolution {
  double value = 0.0;
  Vector x_star;
  Vector y_star;
  ReductionParams params;
  double val_P = 0.0;  // of the shifted pair
  double val_D = 0.0;
  EquilibriumCheck check;
  int iterations = 0;  // solver iterations over all attempts
};

inline constexpr double kKappaStart = 0.75;
inline constexpr double kKappaCap = 1048576.0;  // 2^20

// (P_beta): min <alpha,x> s.t. x in C, Ax - beta in K*; (D_alpha) its dual.
ConicPair build_pair(const ConicGame& g);
// Same with operator lambda*A + kappa*beta<alpha,.>.
ConicPair build_shifted_pair(const ConicGame& g, const ReductionParams& params);

// lambda from the value bounds; kappa from 3/4 doubling until the shifted pair
// solves to optimality. Throws SolverFailure once kappa passes 2^20.
ReductionParams choose_params(const ConicGame& g, const SolveOptions& opts = {});

Vector normalize_solution(const Eigen::Ref<const Vector>& x, double xi);
// Returns (x' / <alpha,x'>, 1 / <alpha,x'>).
std::pair<Vector, double> denormalize_solution(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& alpha);

// Value and verified saddle point. Throws SolverFailure when no kappa up to
// the cap yields an optimal shifted pair whose equilibrium verifies.
GameSolution solve_game(const ConicGame& g, const SolveOptions& opts = {});

}  // namespace conicgame
