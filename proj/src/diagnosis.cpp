#include "conicgame/diagnosis.hpp"

#include <cmath>
#include <optional>

namespace conicgame {

namespace {

RowMatrix hcat(std::initializer_list<RowMatrix> parts) {
  Eigen::Index rows = parts.begin()->rows();
  Eigen::Index cols = 0;
  for (const auto& p : parts) cols += p.cols();
  RowMatrix out(rows, cols);
  Eigen::Index c = 0;
  for (const auto& p : parts) {
    out.middleCols(c, p.cols()) = p;
    c += p.cols();
  }
  return out;
}

RowMatrix eye(Eigen::Index n) { return RowMatrix::Identity(n, n); }
RowMatrix zeros(Eigen::Index r, Eigen::Index c) { return RowMatrix::Zero(r, c); }
RowMatrix row(const Vector& v) { return v.transpose(); }
RowMatrix col(const Vector& v) { return v; }
RowMatrix adj(const LinOp& op) { return op.matrix().transpose(); }

Vector unit_last(Eigen::Index n) {
  Vector e = Vector::Zero(n);
  e(n - 1) = 1.0;
  return e;
}

// Equality rows "link z_head = 0" (when present) and "<weight, z_head> = 1".
void base_equalities(ProgramBuilder& pb, const LinOp& link, const Vector& weight, Eigen::Index tail) {
  if (link.rows() > 0) pb.equal(hcat({link.matrix(), zeros(link.rows(), tail)}), Vector::Zero(link.rows()));
  pb.equal(hcat({row(weight), zeros(1, tail)}), Vector::Ones(1));
}

ConicGame diagnostic_game(const ConicPair& pair, const DiagnosisOptions& opts) {
  ConicGame g;
  g.C = pair.C;
  g.K = pair.K;
  g.alpha = opts.alpha.value_or(canonical_interior(pair.C));
  g.beta = opts.beta.value_or(canonical_interior(pair.K));
  g.A = pair.A;
  g.link_C = pair.link_C;
  g.link_K = pair.link_K;
  g.validate();
  return g;
}

NullspaceMeet range_to_meet(double lo, double hi, const Vector& x_lo, const Vector& x_hi, double tol) {
  NullspaceMeet out;
  out.lo = lo;
  out.hi = hi;
  const bool meets = lo <= tol && hi >= -tol;
  out.meets = meets ? Verdict::Yes : Verdict::No;
  if (meets) {
    if (hi - lo <= 0.0 || lo >= 0.0) {
      out.witness = x_lo;
    } else if (hi <= 0.0) {
      out.witness = x_hi;
    } else {
      const double t = hi / (hi - lo);
      out.witness = t * x_lo + (1.0 - t) * x_hi;
    }
  }
  return out;
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "yes";
    case Verdict::No:
      return "no";
    case Verdict::Untested:
      return "untested";
  }
  return "untested";
}

std::string_view case_name(DiagnosisCase c) {
  switch (c) {
    case DiagnosisCase::NonzeroValue:
      return "nonzero_value";
    case DiagnosisCase::ZeroValueResolved:
      return "zero_value_resolved";
    case DiagnosisCase::ZeroValuePathology:
      return "zero_value_pathology";
  }
  return "zero_value_pathology";
}

std::string_view alt_name(AltFirst a) { return a == AltFirst::I ? "i" : "ii"; }
std::string_view alt_name(AltSecond a) { return a == AltSecond::IPrime ? "i'" : "ii'"; }

StrictFeasibility strict_feasibility_P(const ConicPair& pair, const DiagnosisOptions& opts) {
  pair.validate();
  const Eigen::Index nx = pair.C.total_dim(), nw = pair.link_K.rows();
  const Vector beta_ref = canonical_interior(pair.K);
  auto run = [&](double radius) {
    ProgramBuilder pb(nx + nw + 1);
    pb.in_cone(pair.C, hcat({eye(nx), zeros(nx, nw + 1)}), Vector::Zero(nx));
    pb.in_cone(pair.K, hcat({pair.A.matrix(), adj(pair.link_K), col(beta_ref)}), -pair.b);
    pb.in_cone(ConeProduct::orthant(1), row(unit_last(nx + nw + 1)), Vector::Ones(1));
    if (radius > 0.0) {
      pb.in_cone(ConeProduct::orthant(1), hcat({-row(canonical_interior(pair.C)), zeros(1, nw + 1)}),
                 Vector::Constant(1, radius));
    }
    if (pair.link_C.rows() > 0) {
      pb.equal(hcat({pair.link_C.matrix(), zeros(pair.link_C.rows(), nw + 1)}), Vector::Zero(pair.link_C.rows()));
    }
    return solve(pb.build(unit_last(nx + nw + 1)), opts.solve);
  };
  SolveResult r = run(0.0);
  if (r.status == SolveStatus::Unknown && opts.margin_radius > 0.0) r = run(opts.margin_radius);
  StrictFeasibility out;
  if (r.status != SolveStatus::Optimal) return out;
  const double kappa = r.x(nx + nw);
  out.margin = -kappa;
  out.verdict = kappa < -opts.margin_tol ? Verdict::Yes : Verdict::No;
  out.witness = r.x.head(nx);
  out.multiplier = r.x.segment(nx, nw);
  return out;
}

StrictFeasibility strict_feasibility_D(const ConicPair& pair, const DiagnosisOptions& opts) {
  pair.validate();
  const Eigen::Index nk = pair.K.total_dim(), nu = pair.link_C.rows();
  const Vector alpha_ref = canonical_interior(pair.C);
  auto run = [&](double radius) {
    ProgramBuilder pb(nk + nu + 1);
    pb.in_cone(pair.K, hcat({eye(nk), zeros(nk, nu + 1)}), Vector::Zero(nk));
    pb.in_cone(pair.C, hcat({-adj(pair.A), adj(pair.link_C), col(alpha_ref)}), pair.c);
    pb.in_cone(ConeProduct::orthant(1), row(unit_last(nk + nu + 1)), Vector::Ones(1));
    if (radius > 0.0) {
      pb.in_cone(ConeProduct::orthant(1), hcat({-row(canonical_interior(pair.K)), zeros(1, nu + 1)}),
                 Vector::Constant(1, radius));
    }
    if (pair.link_K.rows() > 0) {
      pb.equal(hcat({pair.link_K.matrix(), zeros(pair.link_K.rows(), nu + 1)}), Vector::Zero(pair.link_K.rows()));
    }
    return solve(pb.build(unit_last(nk + nu + 1)), opts.solve);
  };
  SolveResult r = run(0.0);
  if (r.status == SolveStatus::Unknown && opts.margin_radius > 0.0) r = run(opts.margin_radius);
  StrictFeasibility out;
  if (r.status != SolveStatus::Optimal) return out;
  const double kappa = r.x(nk + nu);
  out.margin = -kappa;
  out.verdict = kappa < -opts.margin_tol ? Verdict::Yes : Verdict::No;
  out.witness = r.x.head(nk);
  out.multiplier = r.x.segment(nk, nu);
  return out;
}

NullspaceMeet optimal_set_meets_nullspace_I(const ConicGame& g, double v, const Vector& c,
                                            const DiagnosisOptions& opts) {
  require_dim(g.C, c, "optimal_set_meets_nullspace_I");
  const Eigen::Index nx = g.C.total_dim(), nw = g.link_K.rows();
  ProgramBuilder pb(nx + nw);
  pb.in_cone(g.C, hcat({eye(nx), zeros(nx, nw)}), Vector::Zero(nx));
  pb.in_cone(g.K, hcat({g.A.matrix(), adj(g.link_K)}), -(v - opts.delta) * g.beta);
  base_equalities(pb, g.link_C, g.alpha, nw);
  Vector obj = Vector::Zero(nx + nw);
  obj.head(nx) = c;
  const SolveResult lo = solve(pb.build(obj), opts.solve);
  const SolveResult hi = solve(pb.build(-obj), opts.solve);
  if (lo.status != SolveStatus::Optimal || hi.status != SolveStatus::Optimal) return {};
  return range_to_meet(lo.primal_obj, -hi.primal_obj, lo.x.head(nx), hi.x.head(nx), opts.meet_tol);
}

NullspaceMeet optimal_set_meets_nullspace_II(const ConicGame& g, double v, const Vector& b,
                                             const DiagnosisOptions& opts) {
  require_dim(g.K, b, "optimal_set_meets_nullspace_II");
  const Eigen::Index nk = g.K.total_dim(), nu = g.link_C.rows();
  ProgramBuilder pb(nk + nu);
  pb.in_cone(g.K, hcat({eye(nk), zeros(nk, nu)}), Vector::Zero(nk));
  pb.in_cone(g.C, hcat({-adj(g.A), adj(g.link_C)}), (v + opts.delta) * g.alpha);
  base_equalities(pb, g.link_K, g.beta, nu);
  Vector obj = Vector::Zero(nk + nu);
  obj.head(nk) = b;
  const SolveResult lo = solve(pb.build(obj), opts.solve);
  const SolveResult hi = solve(pb.build(-obj), opts.solve);
  if (lo.status != SolveStatus::Optimal || hi.status != SolveStatus::Optimal) return {};
  return range_to_meet(lo.primal_obj, -hi.primal_obj, lo.x.head(nk), hi.x.head(nk), opts.meet_tol);
}

ValueEstimate primal_value(const ConicPair& pair, const DiagnosisOptions& opts) {
  ConicPair shifted = pair;
  shifted.c = pair.c + opts.perturbation * canonical_interior(pair.C);
  const PairSolution s = solve_pair(shifted, opts.solve);
  if (s.status != SolveStatus::Optimal) return {};
  return {true, dot(pair.c, s.x)};
}

ValueEstimate dual_value(const ConicPair& pair, const DiagnosisOptions& opts) {
  ConicPair shifted = pair;
  shifted.b = pair.b - opts.perturbation * canonical_interior(pair.K);
  const PairSolution s = solve_pair(shifted, opts.solve);
  if (s.status != SolveStatus::Optimal) return {};
  return {true, dot(s.y, pair.b)};
}

GameSolution solve_game_guarded(const ConicGame& g, const SolveOptions& opts) {
  GameSolution sol = solve_game(g, opts);
  const double a = std::abs(sol.value);
  if (a > 1e-9 && a < 1e-5) {
    SolveOptions tight = opts;
    tight.feas_tol = std::min(opts.feas_tol, 1e-10);
    tight.gap_tol = std::min(opts.gap_tol, 1e-10);
    try {
      sol = solve_game(g, tight);
    } catch (const SolverFailure&) {
    }
  }
  return sol;
}

namespace {

// Strictly feasible point: a feasible point plus an optimal strategy whose image is interior.
Vector nonzero_value_witness_P(const ConicPair& pair, const GameSolution& sol, const DiagnosisOptions& opts) {
  if (pair.linked()) {
    const StrictFeasibility sf = strict_feasibility_P(pair, opts);
    return sf.verdict == Verdict::Yes ? sf.witness : Vector();
  }
  ConicPair feas = pair;
  feas.c.setZero();
  const PairSolution s = solve_pair(feas, opts.solve);
  if (s.status != SolveStatus::Optimal) return {};
  const Vector x = s.x + sol.x_star;
  return check_primal(pair, x, kCertTol).strictly_feasible ? x : Vector();
}

Vector nonzero_value_witness_D(const ConicPair& pair, const GameSolution& sol, const DiagnosisOptions& opts) {
  if (pair.linked()) {
    const StrictFeasibility sf = strict_feasibility_D(pair, opts);
    return sf.verdict == Verdict::Yes ? sf.witness : Vector();
  }
  ConicPair feas = pair;
  feas.b.setZero();
  const PairSolution s = solve_pair(feas, opts.solve);
  if (s.status != SolveStatus::Optimal) return {};
  const Vector y = s.y + sol.y_star;
  return check_dual(pair, y, kCertTol).strictly_feasible ? y : Vector();
}

void fill_values_from_pair(const ConicPair& pair, const DiagnosisOptions& opts, Diagnosis& d) {
  const PairSolution s = solve_pair(pair, opts.solve);
  if (s.status == SolveStatus::Optimal) {
    d.val_P = {true, s.primal_obj};
    d.val_D = {true, s.dual_obj};
  } else {
    d.notes.push_back("pair solve ended " + std::string(status_name(s.status)));
  }
}

// Optimal strategies feasible for their programs with zero objective pairing.
bool rescue(const ConicPair& pair, const ConicGame& g, double v, const DiagnosisOptions& opts, Diagnosis& d) {
  const Eigen::Index nx = g.C.total_dim(), nk = g.K.total_dim();
  const Eigen::Index nw = g.link_K.rows(), nu = g.link_C.rows();

  ProgramBuilder pp(nx + 2 * nw);
  pp.in_cone(g.C, hcat({eye(nx), zeros(nx, 2 * nw)}), Vector::Zero(nx));
  pp.in_cone(g.K, hcat({g.A.matrix(), adj(g.link_K), zeros(nk, nw)}), -(v - opts.delta) * g.beta);
  pp.in_cone(g.K, hcat({g.A.matrix(), zeros(nk, nw), adj(g.link_K)}), -pair.b);
  base_equalities(pp, g.link_C, g.alpha, 2 * nw);
  Vector objp = Vector::Zero(nx + 2 * nw);
  objp.head(nx) = pair.c;
  const SolveResult rp = solve(pp.build(objp), opts.solve);
  if (rp.status != SolveStatus::Optimal || rp.primal_obj > opts.meet_tol) return false;

  ProgramBuilder pd(nk + 2 * nu);
  pd.in_cone(g.K, hcat({eye(nk), zeros(nk, 2 * nu)}), Vector::Zero(nk));
  pd.in_cone(g.C, hcat({-adj(g.A), adj(g.link_C), zeros(nx, nu)}), (v + opts.delta) * g.alpha);
  pd.in_cone(g.C, hcat({-adj(g.A), zeros(nx, nu), adj(g.link_C)}), pair.c);
  base_equalities(pd, g.link_K, g.beta, 2 * nu);
  Vector objd = Vector::Zero(nk + 2 * nu);
  objd.head(nk) = -pair.b;
  const SolveResult rd = solve(pd.build(objd), opts.solve);
  if (rd.status != SolveStatus::Optimal || -rd.primal_obj < -opts.meet_tol) return false;

  d.x_witness = rp.x.head(nx);
  d.y_witness = rd.x.head(nk);
  d.val_P = {true, dot(pair.c, d.x_witness)};
  d.val_D = {true, dot(d.y_witness, pair.b)};
  return true;
}

}  // namespace

Diagnosis classify(const ConicPair& pair, const DiagnosisOptions& opts) {
  pair.validate();
  const ConicGame g = diagnostic_game(pair, opts);
  Diagnosis d;
  const GameSolution sol = solve_game_guarded(g, opts.solve);
  d.game_value = sol.value;

  if (std::abs(sol.value) > opts.value_tol) {
    d.kase = DiagnosisCase::NonzeroValue;
    if (sol.value > 0) {
      d.strict_P = Verdict::Yes;
      d.x_witness = nonzero_value_witness_P(pair, sol, opts);
      if (d.x_witness.size() == 0) d.notes.push_back("no strictly feasible primal point found; pair may be inconsistent");
    } else {
      d.strict_D = Verdict::Yes;
      d.y_witness = nonzero_value_witness_D(pair, sol, opts);
      if (d.y_witness.size() == 0) d.notes.push_back("no strictly feasible dual point found; pair may be inconsistent");
    }
    fill_values_from_pair(pair, opts, d);
    return d;
  }

  const NullspaceMeet mI = optimal_set_meets_nullspace_I(g, sol.value, pair.c, opts);
  const NullspaceMeet mII = optimal_set_meets_nullspace_II(g, sol.value, pair.b, opts);
  d.bI_meets_cperp = mI.meets;
  d.bII_meets_bperp = mII.meets;
  auto strict_from = [](Verdict meets) {
    return meets == Verdict::Untested ? Verdict::Untested : (meets == Verdict::Yes ? Verdict::No : Verdict::Yes);
  };
  d.strict_P = strict_from(mII.meets);
  d.strict_D = strict_from(mI.meets);

  if (mI.meets == Verdict::No || mII.meets == Verdict::No) {
    d.kase = DiagnosisCase::ZeroValueResolved;
    if (d.strict_P == Verdict::Yes) {
      const StrictFeasibility sf = strict_feasibility_P(pair, opts);
      if (sf.verdict == Verdict::Yes) d.x_witness = sf.witness;
    }
    if (d.strict_D == Verdict::Yes) {
      const StrictFeasibility sf = strict_feasibility_D(pair, opts);
      if (sf.verdict == Verdict::Yes) d.y_witness = sf.witness;
    }
    fill_values_from_pair(pair, opts, d);
    return d;
  }

  d.kase = DiagnosisCase::ZeroValuePathology;
  if (mI.meets == Verdict::Untested || mII.meets == Verdict::Untested) {
    d.notes.push_back("an optimal-set test did not solve; strict feasibility undetermined");
  }
  d.rescued = rescue(pair, g, sol.value, opts, d);
  if (!d.rescued) {
    d.val_P = primal_value(pair, opts);
    d.val_D = dual_value(pair, opts);
  }
  return d;
}

namespace {

// Clips solver round-off so the strategies lie in their cones.
void clip_strategies(const ConicGame& g, GameSolution& sol) {
  if (g.link_C.rows() == 0) {
    sol.x_star = project(g.C, sol.x_star);
    sol.x_star /= dot(g.alpha, sol.x_star);
  }
  if (g.link_K.rows() == 0) {
    sol.y_star = project(g.K, sol.y_star);
    sol.y_star /= dot(g.beta, sol.y_star);
  }
}

std::optional<AlternativeVerdict> verified_alternatives(const ConicGame& g, const GameSolution& sol,
                                                        const DiagnosisOptions& opts) {
  const Vector ax = g.A.apply(sol.x_star);
  const Vector aty = -g.A.adjoint_apply(sol.y_star);
  const bool linked = g.link_C.rows() > 0 || g.link_K.rows() > 0;
  // margin of Ax* over K*, and of -A*y* over C*
  const double mx = dual_margin(g.K, g.link_K, g.beta, ax);
  const double my = dual_margin(g.C, g.link_C, g.alpha, aty);
  AlternativeVerdict out;
  out.value = sol.value;
  bool ok = false;
  if (sol.value > opts.value_tol) {
    out.first = AltFirst::II;
    out.second = AltSecond::IIPrime;
    out.witness_first = out.witness_second = sol.x_star;
    ok = linked ? mx > 0.0 : in_cone(g.C, sol.x_star) && in_interior(g.K, ax);
  } else if (sol.value < -opts.value_tol) {
    out.first = AltFirst::I;
    out.second = AltSecond::IPrime;
    out.witness_first = out.witness_second = sol.y_star;
    ok = linked ? my > 0.0 : in_cone(g.K, sol.y_star) && in_interior(g.C, aty);
  } else {
    out.first = AltFirst::I;
    out.second = AltSecond::IIPrime;
    out.witness_first = sol.y_star;
    out.witness_second = sol.x_star;
    ok = linked ? my >= -opts.meet_tol && mx >= -opts.meet_tol
                : in_cone(g.K, sol.y_star) && in_cone(g.C, aty) && in_cone(g.C, sol.x_star) && in_cone(g.K, ax);
  }
  if (!ok) return std::nullopt;
  return out;
}

}  // namespace

AlternativeVerdict alternatives(const ConicGame& g, const DiagnosisOptions& opts) {
  GameSolution sol = solve_game_guarded(g, opts.solve);
  clip_strategies(g, sol);
  if (auto out = verified_alternatives(g, sol, opts)) return *out;
  for (double tol : {1e-10, 1e-11}) {
    if (tol >= std::min(opts.solve.feas_tol, opts.solve.gap_tol)) continue;
    SolveOptions tight = opts.solve;
    tight.feas_tol = tight.gap_tol = tol;
    try {
      sol = solve_game(g, tight);
    } catch (const SolverFailure&) {
      continue;
    }
    clip_strategies(g, sol);
    if (auto out = verified_alternatives(g, sol, opts)) return *out;
  }
  throw SolverFailure("alternative witness failed its membership check", SolveStatus::Unknown);
}

}  // namespace conicgame
