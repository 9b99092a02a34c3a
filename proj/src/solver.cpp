#include "conicgame/solver.hpp"

#include <lapacke.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace conicgame {

std::string_view status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::PrimalInfeasible:
      return "primal_infeasible";
    case SolveStatus::DualInfeasible:
      return "dual_infeasible";
    case SolveStatus::Unknown:
      return "unknown";
  }
  return "unknown";
}

void StandardProgram::validate() const {
  const Eigen::Index m = cone.total_dim();
  if (cone.empty()) throw InputError("standard program: empty cone");
  if (G.rows() != m || h.size() != m) throw InputError("standard program: G/h do not match the cone");
  if (G.cols() != n()) throw InputError("standard program: G does not match the objective");
  if (A_eq.rows() != b_eq.size()) throw InputError("standard program: A_eq/b_eq mismatch");
  if (A_eq.rows() > 0 && A_eq.cols() != n()) throw InputError("standard program: A_eq does not match the objective");
  if (!objective.allFinite() || !h.allFinite() || !b_eq.allFinite() || !G.matrix().allFinite() ||
      !A_eq.matrix().allFinite()) {
    throw InputError("standard program: non-finite data");
  }
}

namespace {

constexpr double kStepFraction = 0.99;
constexpr double kKktRegularization = 1e-13;
constexpr int kRefinementSteps = 3;

// Nesterov-Todd scaling of one cone block. With lambda = W z = W^{-T} s:
//   orthant: W = diag(w), w = sqrt(s / z)
//   psd:     W(Z) = R' Z R, W^{-T}(S) = R^{-1} S R^{-T}
struct BlockScaling {
  Vector w;
  Matrix R, Rinv;
  Vector lam;  // eigenvalues of the scaled point (psd) or lambda itself (orthant)
};

class Scaling {
 public:
  explicit Scaling(const ConeProduct& cone) : cone_(cone), blocks_(cone.blocks().size()) {}

  // Returns false when the point left the cone interior numerically.
  bool update(const Vector& s, const Vector& z) {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& blk = cone_.blocks()[b];
      const auto sb = s.segment(cone_.offset(b), blk.dim());
      const auto zb = z.segment(cone_.offset(b), blk.dim());
      auto& sc = blocks_[b];
      if (blk.kind == BlockKind::Orthant) {
        if ((sb.array() <= 0).any() || (zb.array() <= 0).any()) return false;
        sc.w = (sb.array() / zb.array()).sqrt();
        sc.lam = (sb.array() * zb.array()).sqrt();
      } else {
        Eigen::LLT<Matrix> ls(smat(sb));
        Eigen::LLT<Matrix> lz(smat(zb));
        if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
        const Matrix Ls = ls.matrixL();
        const Matrix Lz = lz.matrixL();
        Eigen::JacobiSVD<Matrix> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Vector sig = svd.singularValues();
        if ((sig.array() <= 0).any()) return false;
        const Vector isq = sig.array().rsqrt();
        sc.R = Ls * svd.matrixV() * isq.asDiagonal();
        sc.Rinv = isq.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
        sc.lam = sig;
      }
    }
    return true;
  }

  // lambda in cone coordinates.
  Vector lambda() const {
    Vector out(cone_.total_dim());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& blk = cone_.blocks()[b];
      if (blk.kind == BlockKind::Orthant) {
        out.segment(cone_.offset(b), blk.dim()) = blocks_[b].lam;
      } else {
        out.segment(cone_.offset(b), blk.dim()) = svec(Matrix(blocks_[b].lam.asDiagonal()));
      }
    }
    return out;
  }

  Vector W(const Vector& v) const {
    return map(v, [](const BlockScaling& sc, const Matrix& V) { return Matrix(sc.R.transpose() * V * sc.R); },
               [](const BlockScaling& sc, const Vector& u) { return Vector(sc.w.cwiseProduct(u)); });
  }
  Vector W_T(const Vector& v) const {
    return map(v, [](const BlockScaling& sc, const Matrix& V) { return Matrix(sc.R * V * sc.R.transpose()); },
               [](const BlockScaling& sc, const Vector& u) { return Vector(sc.w.cwiseProduct(u)); });
  }

  Vector W_inv(const Vector& v) const {
    return map(v, [](const BlockScaling& sc, const Matrix& V) { return Matrix(sc.Rinv.transpose() * V * sc.Rinv); },
               [](const BlockScaling& sc, const Vector& u) { return Vector(u.cwiseQuotient(sc.w)); });
  }
  Vector W_inv_T(const Vector& v) const {
    return map(v, [](const BlockScaling& sc, const Matrix& V) { return Matrix(sc.Rinv * V * sc.Rinv.transpose()); },
               [](const BlockScaling& sc, const Vector& u) { return Vector(u.cwiseQuotient(sc.w)); });
  }

  // Jordan product u o v with lambda = the current scaled point.
  Vector lam_prod(const Vector& u) const {
    return map(
        u,
        [](const BlockScaling& sc, const Matrix& U) {
          Matrix out(U.rows(), U.cols());
          for (Eigen::Index i = 0; i < U.rows(); ++i)
            for (Eigen::Index j = 0; j < U.cols(); ++j) out(i, j) = 0.5 * (sc.lam(i) + sc.lam(j)) * U(i, j);
          return out;
        },
        [](const BlockScaling& sc, const Vector& x) { return Vector(sc.lam.cwiseProduct(x)); });
  }
  // Solves lambda o u = d for u.
  Vector lam_div(const Vector& d) const {
    return map(
        d,
        [](const BlockScaling& sc, const Matrix& D) {
          Matrix out(D.rows(), D.cols());
          for (Eigen::Index i = 0; i < D.rows(); ++i)
            for (Eigen::Index j = 0; j < D.cols(); ++j) out(i, j) = 2.0 * D(i, j) / (sc.lam(i) + sc.lam(j));
          return out;
        },
        [](const BlockScaling& sc, const Vector& x) { return Vector(x.cwiseQuotient(sc.lam)); });
  }

  // Largest alpha with lambda + alpha * d in the cone (infinity if unbounded).
  double max_step(const Vector& d) const {
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& blk = cone_.blocks()[b];
      const auto db = d.segment(cone_.offset(b), blk.dim());
      const auto& lam = blocks_[b].lam;
      if (blk.kind == BlockKind::Orthant) {
        for (Eigen::Index i = 0; i < db.size(); ++i) {
          if (db(i) < 0) alpha = std::min(alpha, -lam(i) / db(i));
        }
      } else {
        Matrix D = smat(db);
        const Vector isq = lam.array().rsqrt();
        D = isq.asDiagonal() * D * isq.asDiagonal();
        const double emin = Eigen::SelfAdjointEigenSolver<Matrix>(D, Eigen::EigenvaluesOnly).eigenvalues()(0);
        if (emin < 0) alpha = std::min(alpha, -1.0 / emin);
      }
    }
    return alpha;
  }

 private:
  template <class PsdFn, class OrthFn>
  Vector map(const Vector& v, PsdFn psd, OrthFn orth) const {
    Vector out(v.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& blk = cone_.blocks()[b];
      const auto seg = v.segment(cone_.offset(b), blk.dim());
      if (blk.kind == BlockKind::Orthant) {
        out.segment(cone_.offset(b), blk.dim()) = orth(blocks_[b], Vector(seg));
      } else {
        const Matrix r = psd(blocks_[b], smat(seg));
        out.segment(cone_.offset(b), blk.dim()) = svec(0.5 * (r + r.transpose()));
      }
    }
    return out;
  }

  const ConeProduct& cone_;
  std::vector<BlockScaling> blocks_;
};

// Jordan product of two arbitrary cone-coordinate vectors.
Vector jordan(const ConeProduct& cone, const Vector& u, const Vector& v) {
  Vector out(u.size());
  for (std::size_t b = 0; b < cone.blocks().size(); ++b) {
    const auto& blk = cone.blocks()[b];
    const auto off = cone.offset(b);
    if (blk.kind == BlockKind::Orthant) {
      out.segment(off, blk.dim()) = u.segment(off, blk.dim()).cwiseProduct(v.segment(off, blk.dim()));
    } else {
      const Matrix U = smat(u.segment(off, blk.dim()));
      const Matrix V = smat(v.segment(off, blk.dim()));
      const Matrix P = U * V;
      out.segment(off, blk.dim()) = svec(0.5 * (P + P.transpose()));
    }
  }
  return out;
}

// Symmetric indefinite KKT matrix in scaled form, Gs = W^{-T} G,
//   [ 0    A_eq'  Gs' ]
//   [ A_eq 0      0   ]
//   [ Gs   0     -I   ]
// factored with Bunch-Kaufman pivoting and solved with iterative refinement.
class KktSystem {
 public:
  bool factor(const Matrix& G, const RowMatrix& Aeq) {
    n_ = G.cols();
    p_ = Aeq.rows();
    m_ = G.rows();
    const Eigen::Index N = n_ + p_ + m_;
    K_ = Matrix::Zero(N, N);
    if (p_ > 0) {
      K_.block(n_, 0, p_, n_) = Aeq;
      K_.block(0, n_, n_, p_) = Aeq.transpose();
    }
    K_.block(n_ + p_, 0, m_, n_) = G;
    K_.block(0, n_ + p_, n_, m_) = G.transpose();
    K_.block(n_ + p_, n_ + p_, m_, m_) = -Matrix::Identity(m_, m_);
    LU_ = K_;
    const double reg = kKktRegularization * std::max(1.0, K_.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n_; ++i) LU_(i, i) += reg;
    for (Eigen::Index i = n_; i < n_ + p_; ++i) LU_(i, i) -= reg;
    ipiv_.resize(static_cast<std::size_t>(N));
    const lapack_int info =
        LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', static_cast<lapack_int>(N), LU_.data(), static_cast<lapack_int>(N),
                       ipiv_.data());
    return info == 0;
  }

  Vector solve(const Vector& rhs) const {
    Vector sol = raw_solve(rhs);
    for (int k = 0; k < kRefinementSteps; ++k) {
      const Vector r = rhs - K_ * sol;
      if (r.lpNorm<Eigen::Infinity>() <= 1e-15 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>())) break;
      sol += raw_solve(r);
    }
    return sol;
  }

 private:
  Vector raw_solve(const Vector& rhs) const {
    Vector b = rhs;
    const auto N = static_cast<lapack_int>(K_.rows());
    LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', N, 1, LU_.data(), N, ipiv_.data(), b.data(), N);
    return b;
  }

  Eigen::Index n_ = 0, p_ = 0, m_ = 0;
  Matrix K_, LU_;
  std::vector<lapack_int> ipiv_;
};

struct Direction {
  Vector dx, dy, dz, ds_scaled, dz_scaled;
  double dtau = 0.0, dkap = 0.0;
};

}  // namespace

SolveResult solve(const StandardProgram& prog, const SolveOptions& opts) {
  prog.validate();
  const ConeProduct& cone = prog.cone;
  const Eigen::Index n = prog.n();
  const Eigen::Index p = prog.A_eq.rows();
  const Eigen::Index m = cone.total_dim();
  const RowMatrix& G = prog.G.matrix();
  const RowMatrix Aeq = p > 0 ? prog.A_eq.matrix() : RowMatrix(0, n);
  const Vector& c = prog.objective;
  const Vector& h = prog.h;
  const Vector& beq = prog.b_eq;
  const double nu = cone.degree();
  const Vector e = canonical_interior(cone);

  const double c_scale = 1.0 + c.norm();
  const double rhs_scale = 1.0 + std::sqrt(h.squaredNorm() + beq.squaredNorm());

  Vector x = Vector::Zero(n);
  Vector y = Vector::Zero(p);
  Vector s = e;
  Vector z = e;
  double tau = 1.0;
  double kap = 1.0;

  SolveResult res;
  Scaling scaling(cone);
  KktSystem kkt;

  auto finish_unknown = [&](int iter) {
    res.status = SolveStatus::Unknown;
    res.x = x / tau;
    res.s = s / tau;
    res.z = z / tau;
    res.y_eq = y / tau;
    res.iterations = iter;
    return res;
  };

  if (opts.verbose) {
    std::fprintf(stderr, "%4s %12s %12s %10s %10s %10s %10s %8s\n", "it", "pcost", "dcost", "gap", "pres", "dres",
                 "tau/kap", "step");
  }

  double last_step = 0.0;
  for (int iter = 0;; ++iter) {
    const Vector rx = (p > 0 ? Vector(Aeq.transpose() * y) : Vector::Zero(n)) + G.transpose() * z + c * tau;
    const Vector ry = (p > 0 ? Vector(-Aeq * x + beq * tau) : Vector(0));
    const Vector rz = s + G * x - h * tau;
    const double rt = kap + c.dot(x) + beq.dot(y) + h.dot(z);
    const double sz = s.dot(z);
    const double mu = (sz + tau * kap) / (nu + 1.0);

    const double pcost = c.dot(x) / tau;
    const double dcost = -(beq.dot(y) + h.dot(z)) / tau;
    const double pres = std::sqrt(ry.squaredNorm() + rz.squaredNorm()) / tau / rhs_scale;
    const double dres = rx.norm() / tau / c_scale;
    const double gap = std::max(sz / (tau * tau), std::abs(pcost - dcost));

    res.primal_obj = pcost;
    res.dual_obj = dcost;
    res.gap = gap;
    res.primal_res = pres;
    res.dual_res = dres;
    res.iterations = iter;

    if (opts.verbose) {
      std::fprintf(stderr, "%4d %12.5e %12.5e %10.3e %10.3e %10.3e %10.3e %8.4f\n", iter, pcost, dcost, gap, pres,
                   dres, tau / kap, last_step);
    }

    if (pres <= opts.feas_tol && dres <= opts.feas_tol &&
        gap <= opts.gap_tol * (1.0 + std::abs(pcost) + std::abs(dcost))) {
      res.status = SolveStatus::Optimal;
      res.x = x / tau;
      res.s = s / tau;
      res.z = z / tau;
      res.y_eq = y / tau;
      return res;
    }

    const double hz_by = h.dot(z) + beq.dot(y);
    if (hz_by < 0) {
      const Vector ray_res = (p > 0 ? Vector(Aeq.transpose() * y) : Vector::Zero(n)) + G.transpose() * z;
      if (ray_res.norm() / (-hz_by) <= opts.feas_tol) {
        res.status = SolveStatus::PrimalInfeasible;
        res.z = z / (-hz_by);
        res.y_eq = y / (-hz_by);
        res.x = Vector::Zero(n);
        res.s = Vector::Zero(m);
        return res;
      }
    }
    const double cx = c.dot(x);
    if (cx < 0) {
      const Vector r1 = G * x + s;
      const Vector r2 = p > 0 ? Vector(Aeq * x) : Vector(0);
      if (std::sqrt(r1.squaredNorm() + r2.squaredNorm()) / (-cx) <= opts.feas_tol) {
        res.status = SolveStatus::DualInfeasible;
        res.x = x / (-cx);
        res.s = s / (-cx);
        res.z = Vector::Zero(m);
        res.y_eq = Vector::Zero(p);
        return res;
      }
    }

    if (iter >= opts.max_iter) return finish_unknown(iter);
    if (!scaling.update(s, z)) return finish_unknown(iter);
    Matrix Gs(m, n);
    for (Eigen::Index j = 0; j < n; ++j) Gs.col(j) = scaling.W_inv_T(G.col(j));
    if (!kkt.factor(Gs, Aeq)) return finish_unknown(iter);
    // Solves the unscaled system; the z part comes back as W dz.
    auto kkt_solve = [&](Vector rhs) {
      rhs.tail(m) = scaling.W_inv_T(rhs.tail(m));
      Vector sol = kkt.solve(rhs);
      return sol;
    };

    const Vector lam = scaling.lambda();
    const Vector lam_sq = scaling.lam_prod(lam);

    // Column of the KKT solve multiplying dtau.
    Vector rhs_tau(n + p + m);
    rhs_tau << -c, beq, h;
    const Vector u2 = kkt_solve(rhs_tau);
    // <h, dz> = <W^{-T} h, W dz>
    const Vector h_s = scaling.W_inv_T(h);
    const double denom_base = c.dot(u2.head(n)) + beq.dot(u2.segment(n, p)) + h_s.dot(u2.tail(m)) - kap / tau;

    auto direction = [&](double eta, const Vector& d_s, double d_kap) {
      const Vector lam_inv_ds = scaling.lam_div(d_s);
      Vector rhs(n + p + m);
      rhs << -eta * rx, eta * ry, -eta * rz - scaling.W_T(lam_inv_ds);
      const Vector u1 = kkt_solve(rhs);
      Direction dir;
      const double num =
          -eta * rt - d_kap / tau - (c.dot(u1.head(n)) + beq.dot(u1.segment(n, p)) + h_s.dot(u1.tail(m)));
      dir.dtau = num / denom_base;
      const Vector sol = u1 + dir.dtau * u2;
      dir.dx = sol.head(n);
      dir.dy = sol.segment(n, p);
      dir.dz_scaled = sol.tail(m);
      dir.dz = scaling.W_inv(dir.dz_scaled);
      dir.ds_scaled = lam_inv_ds - dir.dz_scaled;
      dir.dkap = (d_kap - kap * dir.dtau) / tau;
      return dir;
    };

    auto max_step = [&](const Direction& d) {
      double a = std::min(scaling.max_step(d.ds_scaled), scaling.max_step(d.dz_scaled));
      if (d.dtau < 0) a = std::min(a, -tau / d.dtau);
      if (d.dkap < 0) a = std::min(a, -kap / d.dkap);
      return a;
    };

    // Predictor.
    const Direction aff = direction(1.0, -lam_sq, -tau * kap);
    const double alpha_aff = std::min(1.0, max_step(aff));
    const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

    // Corrector.
    const Vector d_s = -lam_sq - jordan(cone, aff.ds_scaled, aff.dz_scaled) + sigma * mu * e;
    const double d_kap = -tau * kap - aff.dtau * aff.dkap + sigma * mu;
    const Direction dir = direction(1.0 - sigma, d_s, d_kap);
    const double alpha = std::min(1.0, kStepFraction * max_step(dir));
    if (!(alpha > 1e-12) || !std::isfinite(alpha)) return finish_unknown(iter);
    last_step = alpha;

    x += alpha * dir.dx;
    y += alpha * dir.dy;
    z += alpha * dir.dz;
    s += alpha * scaling.W_T(dir.ds_scaled);
    tau += alpha * dir.dtau;
    kap += alpha * dir.dkap;
  }
}

StandardProgram to_standard(const ConicPair& pair) {
  pair.validate();
  const Eigen::Index nx = pair.C.total_dim();
  const Eigen::Index nk = pair.K.total_dim();
  const Eigen::Index nw = pair.link_K.rows();
  StandardProgram prog;
  prog.objective = Vector::Zero(nx + nw);
  prog.objective.head(nx) = pair.c;
  RowMatrix G = RowMatrix::Zero(nx + nk, nx + nw);
  G.block(0, 0, nx, nx) = -RowMatrix::Identity(nx, nx);
  G.block(nx, 0, nk, nx) = -pair.A.matrix();
  if (nw > 0) G.block(nx, nx, nk, nw) = -pair.link_K.matrix().transpose();
  prog.G = LinOp(std::move(G));
  prog.h = Vector::Zero(nx + nk);
  prog.h.tail(nk) = -pair.b;
  prog.cone = pair.C.times(pair.K);
  RowMatrix Aeq = RowMatrix::Zero(pair.link_C.rows(), nx + nw);
  if (pair.link_C.rows() > 0) Aeq.block(0, 0, pair.link_C.rows(), nx) = pair.link_C.matrix();
  prog.A_eq = LinOp(std::move(Aeq));
  prog.b_eq = Vector::Zero(pair.link_C.rows());
  return prog;
}

PairSolution recover(const ConicPair& pair, const SolveResult& r) {
  const Eigen::Index nx = pair.C.total_dim();
  const Eigen::Index nk = pair.K.total_dim();
  const Eigen::Index nw = pair.link_K.rows();
  PairSolution out;
  out.status = r.status;
  out.x = r.x.head(nx);
  out.w = r.x.segment(nx, nw);
  out.y = r.z.tail(nk);
  out.u = r.y_eq;
  out.primal_obj = r.primal_obj;
  out.dual_obj = r.dual_obj;
  out.raw = r;
  return out;
}

PairSolution solve_pair(const ConicPair& pair, const SolveOptions& opts) {
  return recover(pair, solve(to_standard(pair), opts));
}

}  // namespace conicgame

namespace conicgame {

ProgramBuilder& ProgramBuilder::in_cone(const ConeProduct& cone, const RowMatrix& M, const Vector& k) {
  if (M.cols() != n_ || M.rows() != cone.total_dim() || k.size() != cone.total_dim()) {
    throw InputError("program builder: slack block has the wrong shape");
  }
  blocks_.insert(blocks_.end(), cone.blocks().begin(), cone.blocks().end());
  slack_maps_.push_back(M);
  slack_offsets_.push_back(k);
  return *this;
}

ProgramBuilder& ProgramBuilder::equal(const RowMatrix& E, const Vector& f) {
  if (E.cols() != n_ || E.rows() != f.size()) throw InputError("program builder: equality block has the wrong shape");
  eq_maps_.push_back(E);
  eq_rhs_.push_back(f);
  return *this;
}

StandardProgram ProgramBuilder::build(const Vector& objective) const {
  if (objective.size() != n_) throw InputError("program builder: objective has the wrong length");
  StandardProgram prog;
  prog.objective = objective;
  prog.cone = ConeProduct(blocks_);
  const Eigen::Index m = prog.cone.total_dim();
  RowMatrix G(m, n_);
  prog.h.resize(m);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < slack_maps_.size(); ++i) {
    G.middleRows(r, slack_maps_[i].rows()) = -slack_maps_[i];
    prog.h.segment(r, slack_offsets_[i].size()) = slack_offsets_[i];
    r += slack_maps_[i].rows();
  }
  prog.G = LinOp(std::move(G));
  Eigen::Index p = 0;
  for (const auto& E : eq_maps_) p += E.rows();
  RowMatrix Aeq(p, n_);
  prog.b_eq.resize(p);
  r = 0;
  for (std::size_t i = 0; i < eq_maps_.size(); ++i) {
    Aeq.middleRows(r, eq_maps_[i].rows()) = eq_maps_[i];
    prog.b_eq.segment(r, eq_rhs_[i].size()) = eq_rhs_[i];
    r += eq_maps_[i].rows();
  }
  prog.A_eq = LinOp(std::move(Aeq));
  prog.validate();
  return prog;
}

}  // namespace conicgame
