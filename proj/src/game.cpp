#include "conicgame/game.hpp"

#include <cmath>
#include <limits>

namespace conicgame {

namespace {

// min <g, z> over {z in cone : link z = 0, <weight, z> = 1} by a conic solve.
BestResponse minimize_over_base(const ConeProduct& cone, const LinOp& link, const Vector& weight, const Vector& g) {
  const Eigen::Index n = cone.total_dim();
  StandardProgram prog;
  prog.objective = g;
  prog.G = LinOp(RowMatrix(-RowMatrix::Identity(n, n)));
  prog.h = Vector::Zero(n);
  prog.cone = cone;
  RowMatrix eq(link.rows() + 1, n);
  if (link.rows() > 0) eq.topRows(link.rows()) = link.matrix();
  eq.bottomRows(1) = weight.transpose();
  prog.A_eq = LinOp(std::move(eq));
  prog.b_eq = Vector::Zero(link.rows() + 1);
  prog.b_eq(link.rows()) = 1.0;
  const SolveResult r = solve(prog);
  if (r.status != SolveStatus::Optimal) {
    throw SolverFailure("best response solve ended " + std::string(status_name(r.status)), r.status);
  }
  return {r.primal_obj, r.x};
}

Matrix inv_sqrt(const Matrix& B) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(B);
  const Vector d = es.eigenvalues().cwiseMax(1e-12).array().rsqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

BestResponse closed_form_min(const ConeProduct& cone, const Vector& weight, const Vector& g) {
  BestResponse best;
  best.value = std::numeric_limits<double>::infinity();
  best.strategy = Vector::Zero(cone.total_dim());
  Eigen::Index best_off = -1;
  Vector best_seg;
  for (std::size_t b = 0; b < cone.blocks().size(); ++b) {
    const auto& blk = cone.blocks()[b];
    const Eigen::Index off = cone.offset(b);
    const auto gb = g.segment(off, blk.dim());
    const auto wb = weight.segment(off, blk.dim());
    if (blk.kind == BlockKind::Orthant) {
      for (Eigen::Index i = 0; i < gb.size(); ++i) {
        const double r = gb(i) / wb(i);
        if (r < best.value) {
          best.value = r;
          best_off = off;
          best_seg = Vector::Zero(blk.dim());
          best_seg(i) = 1.0 / wb(i);
        }
      }
    } else {
      const Matrix Bmh = inv_sqrt(smat(wb));
      const Matrix M = Bmh * smat(gb) * Bmh;
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
      if (es.eigenvalues()(0) < best.value) {
        best.value = es.eigenvalues()(0);
        best_off = off;
        const Vector u = Bmh * es.eigenvectors().col(0);
        best_seg = svec(u * u.transpose());
      }
    }
  }
  best.strategy.segment(best_off, best_seg.size()) = best_seg;
  return best;
}

double link_residual(const LinOp& link, const Eigen::Ref<const Vector>& v) {
  if (link.rows() == 0) return 0.0;
  return link.apply(v).cwiseAbs().maxCoeff();
}

bool in_base(const ConeProduct& cone, const LinOp& link, const Vector& weight, const Eigen::Ref<const Vector>& v,
             double tol) {
  if (v.size() != cone.total_dim()) return false;
  const double scale = 1.0 + v.cwiseAbs().maxCoeff();
  return in_cone(cone, v, tol) && std::abs(dot(weight, v) - 1.0) <= tol * scale &&
         link_residual(link, v) <= tol * scale;
}

}  // namespace

ConicGame::ConicGame(ConeProduct C_, ConeProduct K_, Vector alpha_, Vector beta_, LinOp A_)
    : C(std::move(C_)), K(std::move(K_)), alpha(std::move(alpha_)), beta(std::move(beta_)), A(std::move(A_)) {
  link_C = LinOp(0, C.total_dim());
  link_K = LinOp(0, K.total_dim());
  validate();
}

void ConicGame::validate() const {
  if (C.empty() || K.empty()) throw InputError("game: cones must be non-empty");
  if (A.cols() != C.total_dim() || A.rows() != K.total_dim()) {
    throw InputError("game: operator is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                     ", cones need " + std::to_string(K.total_dim()) + "x" + std::to_string(C.total_dim()));
  }
  require_dim(C, alpha, "game alpha");
  require_dim(K, beta, "game beta");
  if (!A.matrix().allFinite()) throw InputError("game: non-finite operator");
  if (link_C.cols() != C.total_dim() || link_K.cols() != K.total_dim()) {
    throw InputError("game: link operators have the wrong column count");
  }
  if (!in_interior(C, alpha)) throw InputError("game: alpha is not interior to C");
  if (!in_interior(K, beta)) throw InputError("game: beta is not interior to K");
  if (x_ref.size() > 0 && !in_base(C, link_C, alpha, x_ref, kStrategyTol)) {
    throw InputError("game: reference strategy of player I is not in S");
  }
  if (y_ref.size() > 0 && !in_base(K, link_K, beta, y_ref, kStrategyTol)) {
    throw InputError("game: reference strategy of player II is not in T");
  }
}

bool in_base_I(const ConicGame& g, const Eigen::Ref<const Vector>& x, double tol) {
  return in_base(g.C, g.link_C, g.alpha, x, tol);
}

bool in_base_II(const ConicGame& g, const Eigen::Ref<const Vector>& y, double tol) {
  return in_base(g.K, g.link_K, g.beta, y, tol);
}

double payoff(const ConicGame& g, const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  if (!in_base_I(g, x)) throw InputError("payoff: x is not a strategy of player I");
  if (!in_base_II(g, y)) throw InputError("payoff: y is not a strategy of player II");
  return dot(y, g.A.apply(x));
}

BestResponse best_response_II(const ConicGame& g, const Eigen::Ref<const Vector>& x) {
  if (!in_base_I(g, x)) throw InputError("best_response_II: x is not a strategy of player I");
  const Vector gx = g.A.apply(x);
  if (g.link_K.rows() > 0) return minimize_over_base(g.K, g.link_K, g.beta, gx);
  return closed_form_min(g.K, g.beta, gx);
}

BestResponse best_response_I(const ConicGame& g, const Eigen::Ref<const Vector>& y) {
  if (!in_base_II(g, y)) throw InputError("best_response_I: y is not a strategy of player II");
  const Vector gy = -g.A.adjoint_apply(y);
  BestResponse r =
      g.link_C.rows() > 0 ? minimize_over_base(g.C, g.link_C, g.alpha, gy) : closed_form_min(g.C, g.alpha, gy);
  r.value = -r.value;
  return r;
}

double dual_margin(const ConeProduct& cone, const LinOp& link, const Vector& weight,
                   const Eigen::Ref<const Vector>& v) {
  require_dim(cone, v, "dual_margin");
  const Vector vv = v;
  if (link.rows() > 0) return minimize_over_base(cone, link, weight, vv).value;
  return closed_form_min(cone, weight, vv).value;
}

Vector reference_strategy_I(const ConicGame& g) {
  if (g.x_ref.size() > 0) return g.x_ref;
  if (g.link_C.rows() > 0) return minimize_over_base(g.C, g.link_C, g.alpha, Vector::Zero(g.C.total_dim())).strategy;
  const Vector e = canonical_interior(g.C);
  return e / dot(g.alpha, e);
}

Vector reference_strategy_II(const ConicGame& g) {
  if (g.y_ref.size() > 0) return g.y_ref;
  if (g.link_K.rows() > 0) return minimize_over_base(g.K, g.link_K, g.beta, Vector::Zero(g.K.total_dim())).strategy;
  const Vector e = canonical_interior(g.K);
  return e / dot(g.beta, e);
}

std::pair<double, double> value_bounds(const ConicGame& g) {
  return {best_response_II(g, reference_strategy_I(g)).value, best_response_I(g, reference_strategy_II(g)).value};
}

EquilibriumCheck verify_equilibrium(const ConicGame& g, const Eigen::Ref<const Vector>& x,
                                    const Eigen::Ref<const Vector>& y, double tol) {
  EquilibriumCheck out;
  out.v_hat = payoff(g, x, y);
  out.residual_II = out.v_hat - best_response_II(g, x).value;
  out.residual_I = best_response_I(g, y).value - out.v_hat;
  const double scale = 1.0 + std::abs(out.v_hat);
  out.ok = out.residual_I <= tol * scale && out.residual_II <= tol * scale;
  return out;
}

ConicGame normalize_leveled(const ConicGame& g, const LeveledSpec& spec_I, const LeveledSpec& spec_II) {
  for (const LeveledSpec* s : {&spec_I, &spec_II}) {
    if (!(s->p > 0.0) || !(s->q >= s->p) || !std::isfinite(s->q)) {
      throw InputError("leveled set needs 0 < p <= q");
    }
  }
  ConicGame out = g;
  out.alpha = g.alpha / spec_I.q;
  out.beta = g.beta / spec_II.p;
  if (out.x_ref.size() > 0) out.x_ref *= spec_I.q;
  if (out.y_ref.size() > 0) out.y_ref *= spec_II.p;
  out.validate();
  return out;
}

}  // namespace conicgame
