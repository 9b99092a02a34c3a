#include "conicgame/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace conicgame {

namespace {

double choose_lambda(const ConicGame& g) {
  const auto [lb, ub] = value_bounds(g);
  return 1.0 / (2.0 * std::max({1.0, std::abs(lb), std::abs(ub)}));
}

// gamma with A = gamma * beta alpha^T, when A has that form up to rounding.
std::optional<double> constant_payoff(const ConicGame& g) {
  const RowMatrix& a = g.A.matrix();
  Eigen::Index i = 0, j = 0;
  g.beta.cwiseAbs().maxCoeff(&i);
  g.alpha.cwiseAbs().maxCoeff(&j);
  if (!(g.beta(i) * g.alpha(j) != 0.0)) return std::nullopt;
  const double gamma = a(i, j) / (g.beta(i) * g.alpha(j));
  const double rest = (a - gamma * g.beta * g.alpha.transpose()).cwiseAbs().maxCoeff();
  if (rest > 1e-14 * std::max(1.0, a.cwiseAbs().maxCoeff())) return std::nullopt;
  return gamma;
}

}  // namespace

ConicPair build_pair(const ConicGame& g) {
  ConicPair pair(g.C, g.K, g.A, g.beta, g.alpha);
  pair.link_C = g.link_C;
  pair.link_K = g.link_K;
  pair.validate();
  return pair;
}

ConicPair build_shifted_pair(const ConicGame& g, const ReductionParams& params) {
  if (!(params.lambda > 0.0)) throw InputError("reduction: lambda must be positive");
  ConicPair pair = build_pair(g);
  pair.A = combine(params.lambda, g.A, params.kappa, make_E(g.alpha, g.beta));
  return pair;
}

ReductionParams choose_params(const ConicGame& g, const SolveOptions& opts) {
  ReductionParams params{choose_lambda(g), kKappaStart};
  for (; params.kappa <= kKappaCap; params.kappa *= 2.0) {
    if (solve_pair(build_shifted_pair(g, params), opts).status == SolveStatus::Optimal) return params;
  }
  throw SolverFailure("no kappa up to 2^20 gave an optimal shifted pair", SolveStatus::Unknown);
}

Vector normalize_solution(const Eigen::Ref<const Vector>& x, double xi) {
  if (!(xi > 0.0)) throw InputError("normalize_solution: scale must be positive");
  return x / xi;
}

std::pair<Vector, double> denormalize_solution(const Eigen::Ref<const Vector>& x,
                                               const Eigen::Ref<const Vector>& alpha) {
  const double s = dot(alpha, x);
  if (!(s > 0.0)) throw InputError("denormalize_solution: <alpha,x> must be positive");
  return {x / s, 1.0 / s};
}

GameSolution solve_game(const ConicGame& g, const SolveOptions& opts) {
  GameSolution out;
  out.params = {choose_lambda(g), kKappaStart};
  const bool linked = g.link_C.rows() > 0 || g.link_K.rows() > 0;
  if (const auto gamma = linked || g.A.rows() == 0 ? std::nullopt : constant_payoff(g)) {
    // the payoff is gamma on every pair of strategies
    const Vector ec = canonical_interior(g.C), ek = canonical_interior(g.K);
    out.value = *gamma;
    out.x_star = ec / dot(g.alpha, ec);
    out.y_star = ek / dot(g.beta, ek);
    out.val_P = out.val_D = 1.0 / (out.params.lambda * *gamma + out.params.kappa);
    out.check = verify_equilibrium(g, out.x_star, out.y_star, 1e-6);
    return out;
  }
  SolveStatus last = SolveStatus::Unknown;
  for (; out.params.kappa <= kKappaCap; out.params.kappa *= 2.0) {
    const PairSolution sol = solve_pair(build_shifted_pair(g, out.params), opts);
    out.iterations += sol.raw.iterations;
    last = sol.status;
    if (sol.status != SolveStatus::Optimal || !(sol.primal_obj > 0.0)) continue;
    out.val_P = sol.primal_obj;
    out.val_D = sol.dual_obj;
    const double v_kappa = 1.0 / sol.primal_obj;
    out.value = (v_kappa - out.params.kappa) / out.params.lambda;
    out.x_star = denormalize_solution(v_kappa * sol.x, g.alpha).first;
    out.y_star = denormalize_solution(v_kappa * sol.y, g.beta).first;
    if (!in_base_I(g, out.x_star) || !in_base_II(g, out.y_star)) continue;
    out.check = verify_equilibrium(g, out.x_star, out.y_star, 1e-6);
    if (out.check.ok) return out;
  }
  throw SolverFailure("no verified equilibrium for kappa up to 2^20 (last solve: " + std::string(status_name(last)) +
                          ")",
                      last);
}

}  // namespace conicgame
