#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "conicgame/programs.hpp"

namespace conicgame {

// Canonical form solved by the interior-point method:
//
//   minimize    <objective, x>
//   subject to  G x + s = h,  s in cone
//               A_eq x = b_eq
//
// All decision variables are free; cone membership is carried by the slack s.
struct StandardProgram {
  Vector objective;
  LinOp G;
  Vector h;
  ConeProduct cone;
  LinOp A_eq;  // may have 0 rows
  Vector b_eq;

  Eigen::Index n() const { return objective.size(); }
  void validate() const;
};

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, Unknown };

std::string_view status_name(SolveStatus s);

// A sub-solve that a computation depends on did not reach the status it needs.
struct SolverFailure : std::runtime_error {
  SolveStatus status;
  SolverFailure(const std::string& what, SolveStatus s) : std::runtime_error(what), status(s) {}
};

struct SolveOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iter = 200;
  bool verbose = false;  // iteration log on stderr
};

// For Optimal: (x, s) primal and (z, y_eq) dual solutions with
//   G'z + A_eq'y_eq + objective = 0,  dual objective = -<h,z> - <b_eq,y_eq>.
// For PrimalInfeasible: (z, y_eq) is a ray with G'z + A_eq'y_eq = 0 and
//   <h,z> + <b_eq,y_eq> = -1.
// For DualInfeasible: (x, s) is a ray with G x + s = 0, A_eq x = 0 and
//   <objective,x> = -1.
// For Unknown: the last iterate scaled by 1/tau.
struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  Vector x, s, z, y_eq;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;
  double primal_res = 0.0;
  double dual_res = 0.0;
  int iterations = 0;
};

SolveResult solve(const StandardProgram& prog, const SolveOptions& opts = {});

// ConicPair -> StandardProgram with decision variables (x, w) and slack
// blocks (x, Ax - b + link_K* w) over C × K.
struct PairSolution {
  SolveStatus status = SolveStatus::Unknown;
  Vector x, w;  // primal point and link multiplier
  Vector y, u;  // dual point and link multiplier
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  SolveResult raw;
};

// Assembles a StandardProgram from affine slack blocks s = M z + k in cone and
// equality rows E z = f over a decision vector z of fixed length.
class ProgramBuilder {
 public:
  explicit ProgramBuilder(Eigen::Index n) : n_(n) {}

  ProgramBuilder& in_cone(const ConeProduct& cone, const RowMatrix& M, const Vector& k);
  ProgramBuilder& equal(const RowMatrix& E, const Vector& f);
  StandardProgram build(const Vector& objective) const;

 private:
  Eigen::Index n_;
  std::vector<ConeBlock> blocks_;
  std::vector<RowMatrix> slack_maps_;
  std::vector<Vector> slack_offsets_;
  std::vector<RowMatrix> eq_maps_;
  std::vector<Vector> eq_rhs_;
};

StandardProgram to_standard(const ConicPair& pair);
PairSolution recover(const ConicPair& pair, const SolveResult& result);
PairSolution solve_pair(const ConicPair& pair, const SolveOptions& opts = {});

}  // namespace conicgame
