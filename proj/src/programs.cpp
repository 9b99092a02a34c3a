#include "conicgame/programs.hpp"

#include <cmath>
#include <string>

namespace conicgame {

namespace {

void append_block_margins(const ConeProduct& k, const Vector& v, std::vector<double>& out) {
  for (std::size_t b = 0; b < k.blocks().size(); ++b) {
    const auto& blk = k.blocks()[b];
    out.push_back(min_eig(blk, v.segment(k.offset(b), blk.dim())));
  }
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

ConicPair::ConicPair(ConeProduct C_, ConeProduct K_, LinOp A_, Vector b_, Vector c_)
    : C(std::move(C_)), K(std::move(K_)), A(std::move(A_)), b(std::move(b_)), c(std::move(c_)) {
  link_C = LinOp(0, C.total_dim());
  link_K = LinOp(0, K.total_dim());
  validate();
}

void ConicPair::validate() const {
  if (C.empty() || K.empty()) throw InputError("pair: cones must be non-empty");
  if (A.cols() != C.total_dim() || A.rows() != K.total_dim()) {
    throw InputError("pair: operator is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                     ", cones need " + std::to_string(K.total_dim()) + "x" + std::to_string(C.total_dim()));
  }
  if (b.size() != K.total_dim()) throw InputError("pair: b has the wrong dimension");
  if (c.size() != C.total_dim()) throw InputError("pair: c has the wrong dimension");
  if (link_C.cols() != C.total_dim()) throw InputError("pair: link_C has the wrong column count");
  if (link_K.cols() != K.total_dim()) throw InputError("pair: link_K has the wrong column count");
  if (!b.allFinite() || !c.allFinite() || !A.matrix().allFinite()) throw InputError("pair: non-finite data");
}

double tolerance_scale(std::initializer_list<const Vector*> vs) {
  double m = 0.0;
  for (const Vector* v : vs) m = std::max(m, max_abs(*v));
  return 1.0 + m;
}

Vector primal_slack(const ConicPair& pair, const Eigen::Ref<const Vector>& x, const Vector& w) {
  Vector s = pair.A.apply(x) - pair.b;
  if (w.size() > 0) s += pair.link_K.adjoint_apply(w);
  return s;
}

Vector dual_slack(const ConicPair& pair, const Eigen::Ref<const Vector>& y, const Vector& u) {
  Vector r = pair.c - pair.A.adjoint_apply(y);
  if (u.size() > 0) r += pair.link_C.adjoint_apply(u);
  return r;
}

CertCheck check_primal(const ConicPair& pair, const Eigen::Ref<const Vector>& x, double tol, const Vector& w) {
  require_dim(pair.C, x, "check_primal");
  if (w.size() != 0 && w.size() != pair.link_K.rows()) throw InputError("check_primal: multiplier has the wrong size");
  const Vector slack = primal_slack(pair, x, w);
  CertCheck out;
  out.objective = dot(pair.c, x);
  append_block_margins(pair.C, x, out.residuals);
  append_block_margins(pair.K, slack, out.residuals);
  const Vector xv = x;
  out.link_residual = pair.link_C.rows() > 0 ? max_abs(pair.link_C.apply(x)) : 0.0;
  const bool links_ok = out.link_residual <= tol * tolerance_scale({&xv});
  out.feasible = links_ok && in_cone(pair.C, x, tol) && in_cone(pair.K, slack, tol);
  out.strictly_feasible = out.feasible && in_interior(pair.K, slack, tol);
  return out;
}

CertCheck check_dual(const ConicPair& pair, const Eigen::Ref<const Vector>& y, double tol, const Vector& u) {
  require_dim(pair.K, y, "check_dual");
  if (u.size() != 0 && u.size() != pair.link_C.rows()) throw InputError("check_dual: multiplier has the wrong size");
  const Vector slack = dual_slack(pair, y, u);
  CertCheck out;
  out.objective = dot(y, pair.b);
  append_block_margins(pair.K, y, out.residuals);
  append_block_margins(pair.C, slack, out.residuals);
  const Vector yv = y;
  out.link_residual = pair.link_K.rows() > 0 ? max_abs(pair.link_K.apply(y)) : 0.0;
  const bool links_ok = out.link_residual <= tol * tolerance_scale({&yv});
  out.feasible = links_ok && in_cone(pair.K, y, tol) && in_cone(pair.C, slack, tol);
  out.strictly_feasible = out.feasible && in_interior(pair.C, slack, tol);
  return out;
}

namespace {

void require_feasible(const ConicPair& pair, const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                      double tol, const Vector& w, const Vector& u, const char* what) {
  const CertCheck p = check_primal(pair, x, tol, w);
  if (!p.feasible) {
    double worst = p.link_residual > 0 ? -p.link_residual : 0.0;
    for (double r : p.residuals) worst = std::min(worst, r);
    throw InputError(std::string(what) + ": x is not primal feasible (worst residual " + std::to_string(worst) + ")");
  }
  const CertCheck d = check_dual(pair, y, tol, u);
  if (!d.feasible) {
    double worst = d.link_residual > 0 ? -d.link_residual : 0.0;
    for (double r : d.residuals) worst = std::min(worst, r);
    throw InputError(std::string(what) + ": y is not dual feasible (worst residual " + std::to_string(worst) + ")");
  }
}

}  // namespace

double duality_gap(const ConicPair& pair, const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                   double tol, const Vector& w, const Vector& u) {
  require_feasible(pair, x, y, tol, w, u, "duality_gap");
  return dot(pair.c, x) - dot(y, pair.b);
}

bool complementary_slackness(const ConicPair& pair, const Eigen::Ref<const Vector>& x,
                             const Eigen::Ref<const Vector>& y, double tol, const Vector& w, const Vector& u) {
  require_feasible(pair, x, y, tol, w, u, "complementary_slackness");
  const Vector xv = x;
  const Vector yv = y;
  const double scale = tolerance_scale({&xv, &yv, &pair.b, &pair.c});
  const double primal_pairing = dot(y, primal_slack(pair, x, w));
  const double dual_pairing = dot(dual_slack(pair, y, u), x);
  return std::abs(primal_pairing) <= tol * scale && std::abs(dual_pairing) <= tol * scale;
}

}  // namespace conicgame
