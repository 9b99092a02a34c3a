#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "support.hpp"

using namespace conicgame;
using support::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// S_II(t): x in C, <alpha,x> = 1, Ax - t*beta in K.
SolveStatus system_II(const ConicGame& g, double t) {
  const Eigen::Index n = g.C.total_dim();
  ProgramBuilder b(n);
  b.in_cone(g.C, RowMatrix::Identity(n, n), Vector::Zero(n));
  b.in_cone(g.K, g.A.matrix(), -t * g.beta);
  b.equal(RowMatrix(g.alpha.transpose()), Vector::Ones(1));
  return solve(b.build(Vector::Zero(n))).status;
}

// S_I(t): y in K, <beta,y> = 1, -A*y - t*alpha in C.
SolveStatus system_I(const ConicGame& g, double t) {
  const Eigen::Index m = g.K.total_dim();
  ProgramBuilder b(m);
  b.in_cone(g.K, RowMatrix::Identity(m, m), Vector::Zero(m));
  b.in_cone(g.C, RowMatrix(-g.A.matrix().transpose()), -t * g.alpha);
  b.equal(RowMatrix(g.beta.transpose()), Vector::Ones(1));
  return solve(b.build(Vector::Zero(m))).status;
}

constexpr double kSearchRadius = 1e4;

// max t <= 1 s.t. x in C, Ax - b - t*e in K with e the canonical interior of K:
// the largest uniform slack margin over F(P), searched within <e_C, x> <= kSearchRadius.

double direct_margin_P(const ConicPair& p) {
  const Eigen::Index n = p.C.total_dim();
  const Vector e = canonical_interior(p.K);
  ProgramBuilder b(n + 1);
  RowMatrix mc = RowMatrix::Zero(n, n + 1);
  mc.leftCols(n).setIdentity();
  b.in_cone(p.C, mc, Vector::Zero(n));
  RowMatrix mk(p.K.total_dim(), n + 1);
  mk << p.A.matrix(), -e;
  b.in_cone(p.K, mk, -p.b);
  RowMatrix cap = RowMatrix::Zero(1, n + 1);
  cap(0, n) = -1.0;
  b.in_cone(ConeProduct::orthant(1), cap, Vector::Ones(1));
  RowMatrix box = RowMatrix::Zero(1, n + 1);
  box.leftCols(n) = -canonical_interior(p.C).transpose();
  b.in_cone(ConeProduct::orthant(1), box, Vector::Constant(1, kSearchRadius));
  Vector obj = Vector::Zero(n + 1);
  obj(n) = -1.0;
  const SolveResult r = solve(b.build(obj));
  if (r.status != SolveStatus::Optimal) return std::nan("");
  return -r.primal_obj;
}

// max t <= 1 s.t. y in K, c - A*y - t*e in C.
double direct_margin_D(const ConicPair& p) {
  const Eigen::Index m = p.K.total_dim();
  const Vector e = canonical_interior(p.C);
  ProgramBuilder b(m + 1);
  RowMatrix mk = RowMatrix::Zero(m, m + 1);
  mk.leftCols(m).setIdentity();
  b.in_cone(p.K, mk, Vector::Zero(m));
  RowMatrix mc(p.C.total_dim(), m + 1);
  mc << RowMatrix(-p.A.matrix().transpose()), -e;
  b.in_cone(p.C, mc, p.c);
  RowMatrix cap = RowMatrix::Zero(1, m + 1);
  cap(0, m) = -1.0;
  b.in_cone(ConeProduct::orthant(1), cap, Vector::Ones(1));
  RowMatrix box = RowMatrix::Zero(1, m + 1);
  box.leftCols(m) = -canonical_interior(p.K).transpose();
  b.in_cone(ConeProduct::orthant(1), box, Vector::Constant(1, kSearchRadius));
  Vector obj = Vector::Zero(m + 1);
  obj(m) = -1.0;
  const SolveResult r = solve(b.build(obj));
  if (r.status != SolveStatus::Optimal) return std::nan("");
  return -r.primal_obj;
}

// Points u, v of the cone with <u,v> = 0 and u != 0.
std::pair<Vector, Vector> complementary_points(Rng& rng, const ConeProduct& k) {
  Vector u = Vector::Zero(k.total_dim()), v = Vector::Zero(k.total_dim());
  for (std::size_t b = 0; b < k.blocks().size(); ++b) {
    const ConeBlock& blk = k.blocks()[b];
    const int r = support::uniform_int(rng, b == 0 ? 1 : 0, blk.size);
    Vector eu = Vector::Zero(blk.size), ev = Vector::Zero(blk.size);
    for (int i = 0; i < blk.size; ++i) (i < r ? eu(i) : ev(i)) = support::uniform(rng, 0.1, 1.0);
    if (blk.kind == BlockKind::Orthant) {
      u.segment(k.offset(b), blk.dim()) = eu;
      v.segment(k.offset(b), blk.dim()) = ev;
    } else {
      Eigen::HouseholderQR<Matrix> qr(support::random_sym(rng, blk.size) + 0.1 * Matrix::Identity(blk.size, blk.size));
      const Matrix q = qr.householderQ();
      const Matrix mu = q * eu.asDiagonal() * q.transpose(), mv = q * ev.asDiagonal() * q.transpose();
      u.segment(k.offset(b), blk.dim()) = svec(0.5 * (mu + mu.transpose()));
      v.segment(k.offset(b), blk.dim()) = svec(0.5 * (mv + mv.transpose()));
    }
  }
  return {u, v};
}

// Consistent pair; kind 0 strictly feasible both sides, 1 primal side on a
// face (A*y0 = 0, <y0,s0> = 0), 2 dual side on a face (A x0 = 0, <x0,t0> = 0).
ConicPair consistent_pair(Rng& rng, int kind) {
  const ConeProduct C = support::random_cones(rng), K = support::random_cones(rng);
  RowMatrix A = support::random_op(rng, K.total_dim(), C.total_dim()).matrix();
  Vector x0 = support::random_cone_point(rng, C), s0 = support::random_cone_point(rng, K);
  Vector y0 = support::random_cone_point(rng, K), t0 = support::random_cone_point(rng, C);
  if (kind == 1) {
    std::tie(y0, s0) = complementary_points(rng, K);
    A -= y0 * (y0.transpose() * A) / y0.squaredNorm();
  } else if (kind == 2) {
    std::tie(x0, t0) = complementary_points(rng, C);
    A -= (A * x0) * x0.transpose() / x0.squaredNorm();
  }
  return support::pair_around(C, K, LinOp(A), x0, s0, y0, t0);
}

Matrix rps() {
  Matrix R(3, 3);
  R << 0, -1, 1, 1, 0, -1, -1, 1, 0;
  return R;
}

Matrix poly(int m, int n, std::initializer_list<std::tuple<int, int, double>> entries) {
  Matrix p = Matrix::Zero(m + 1, n + 1);
  for (const auto& [i, j, v] : entries) p(i, j) = v;
  return p;
}

Outcome criterion1() {
  Outcome o;
  const Example44 e = example44(Example44Variant::Original);
  const CertCheck xp = check_primal(e.pair, Eigen::Vector2d(0, 0));
  Matrix y = Matrix::Zero(3, 3);
  y(2, 2) = 1;
  const CertCheck yd = check_dual(e.pair, svec(y));
  o.require(xp.feasible && xp.objective == 0.0, "x = 0 is not a feasible point of value 0");
  o.require(yd.feasible && std::abs(yd.objective + 1.0) <= 1e-12, "y33 = 1 is not a feasible point of value -1");
  const ValueEstimate vp = primal_value(e.pair), vd = dual_value(e.pair);
  o.require(vp.ok && std::abs(vp.value) <= 1e-6, fmt("val(P) = %.3g", vp.value));
  o.require(vd.ok && std::abs(vd.value + 1.0) <= 1e-6, fmt("val(D) = %.3g", vd.value));
  const auto t0 = std::chrono::steady_clock::now();
  const Diagnosis d = classify(e.pair);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(d.strict_P == Verdict::No && d.strict_D == Verdict::No, "a side reported strictly feasible");
  o.require(d.kase == DiagnosisCase::ZeroValuePathology, "case is not the pathology");
  o.require(secs < 1.0, fmt("classify took %.2f s", secs));
  if (o.pass) o.detail = fmt("val(P)=%.2g val(D)=%.9f classify %.3f s", vp.value, vd.value, secs);
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst = 0.0;
  for (double rho : {0.0, 0.5, 2.0}) {
    const ConicPair p = example44(Example44Variant::Rho, rho).pair;
    const Diagnosis d = classify(p);
    o.require(d.rescued && d.x_witness.size() == 2 && d.y_witness.size() == 6, fmt("rho=%g: no witnesses", rho));
    if (!o.pass) break;
    o.require(check_primal(p, d.x_witness).feasible && check_dual(p, d.y_witness).feasible,
              fmt("rho=%g: witness infeasible", rho));
    o.require(complementary_slackness(p, d.x_witness, d.y_witness, 1e-6), fmt("rho=%g: pairings nonzero", rho));
    const double vp = dot(p.c, d.x_witness), vd = dot(d.y_witness, p.b);
    worst = std::max({worst, std::abs(vp), std::abs(vd)});
    o.require(std::abs(vp) <= 1e-6 && std::abs(vd) <= 1e-6, fmt("rho=%g: values %.3g, %.3g", rho, vp, vd));
  }
  if (o.pass) o.detail = fmt("max |value| %.2g", worst);
  return o;
}

Outcome criterion3() {
  Outcome o;
  double gaps[3], vals[3];
  const double sigmas[3] = {0.5, 0.75, 1.0};
  for (int i = 0; i < 3; ++i) {
    const ConicPair p = example44(Example44Variant::Sigma, sigmas[i]).pair;
    const ValueEstimate vp = primal_value(p), vd = dual_value(p);
    o.require(vp.ok && vd.ok, fmt("sigma=%g: value solve failed", sigmas[i]));
    gaps[i] = vp.value - vd.value;
    vals[i] = vd.value;
  }
  if (!o.pass) return o;
  o.require(gaps[0] > 0.1, fmt("gap(0.5) = %.3g", gaps[0]));
  o.require(gaps[1] > 0.1, fmt("gap(0.75) = %.3g", gaps[1]));
  o.require(std::abs(gaps[2]) <= 1e-6, fmt("gap(1) = %.3g", gaps[2]));
  o.require(std::abs(vals[2] + 1.0) <= 1e-6, fmt("common value %.9f", vals[2]));
  if (o.pass) o.detail = fmt("gaps %.4f %.4f %.2g", gaps[0], gaps[1], gaps[2]);
  return o;
}

Outcome criterion4() {
  Outcome o;
  Matrix R(2, 2);
  R << 3, 0, 1, 2;
  const GameSolution s = solve_game(matrix_game(R));
  o.require(std::abs(s.value - 1.5) <= 1e-6, fmt("value %.9f", s.value));
  o.require(s.check.residual_I <= 1e-6 && s.check.residual_II <= 1e-6,
            fmt("residuals %.3g %.3g", s.check.residual_I, s.check.residual_II));
  const auto [lo, hi] = support::grid_value_2x2(R, 1e-3);
  o.require(std::abs(lo - s.value) <= 2e-3 && std::abs(hi - s.value) <= 2e-3, fmt("grid [%.6f, %.6f]", lo, hi));
  if (o.pass) o.detail = fmt("value %.9f grid [%.4f, %.4f]", s.value, lo, hi);
  return o;
}

Outcome criterion5() {
  Outcome o;
  const ConicGame g = matrix_game(rps());
  const GameSolution s = solve_game(g);
  o.require(std::abs(s.value) <= 1e-8, fmt("value %.3g", s.value));
  double worst = 0.0;
  for (double kappa : {0.75, 1.0, 2.0}) {
    const PairSolution p = solve_pair(build_shifted_pair(g, {1.0, kappa}));
    o.require(p.status == SolveStatus::Optimal, fmt("kappa %g: not optimal", kappa));
    if (p.status != SolveStatus::Optimal) continue;
    const double err = std::abs(1.0 / p.primal_obj - kappa);
    worst = std::max(worst, err);
    o.require(err <= 1e-7, fmt("kappa %g: 1/val = %.10f", kappa, 1.0 / p.primal_obj));
  }
  if (o.pass) o.detail = fmt("value %.2g, max |1/val - kappa| %.2g", s.value, worst);
  return o;
}

Outcome criterion6() {
  Outcome o;
  Rng rng(606);
  double worst_res = 0.0, worst_gap = 0.0;
  const int m = 3, n = 3;
  for (int t = 0; t < 50; ++t) {
    std::vector<double> T(m * m * n * n);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = k; l < n; ++l) {
            const double v = support::uniform(rng);
            for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}})
              for (auto [c, d] : {std::pair{k, l}, std::pair{l, k}}) T[((a * m + b) * n + c) * n + d] = v;
          }
    const ConicGame g = sdp_game(T, m, n);
    const GameSolution s = solve_game(g);
    const double up = best_response_I(g, s.y_star).value, down = best_response_II(g, s.x_star).value;
    const double scale = support::scale_of(s.value);
    worst_res = std::max({worst_res, s.check.residual_I / scale, s.check.residual_II / scale});
    worst_gap = std::max(worst_gap, std::abs(up - down) / scale);
  }
  o.require(worst_res <= 1e-6, fmt("residual %.3g", worst_res));
  o.require(worst_gap <= 1e-6, fmt("|BR_I - BR_II| %.3g", worst_gap));
  if (o.pass) o.detail = fmt("max residual %.2g, max |BR_I - BR_II| %.2g", worst_res, worst_gap);
  return o;
}

ConicGame skew_game(Rng& rng) {
  const ConeProduct C = support::random_cones(rng);
  const RowMatrix m = support::random_op(rng, C.total_dim(), C.total_dim()).matrix();
  ConicGame g(C, C, canonical_interior(C), canonical_interior(C), LinOp(RowMatrix(m - m.transpose())));
  g.validate();
  return g;
}

Outcome criterion7() {
  Outcome o;
  Rng rng(707);
  constexpr double kStrict = 1e-6;
  int counts[3] = {0, 0, 0};
  for (int t = 0; t < 200; ++t) {
    const int kinds = t % 3;  // orthant, PSD, mixed
    const ConicGame g = t % 5 == 4 ? skew_game(rng) : support::random_game(rng, kinds, t % 2 == 1);
    AlternativeVerdict a;
    try {
      a = alternatives(g);
    } catch (const SolverFailure& e) {
      o.require(false, "game " + std::to_string(t) + ": " + e.what());
      break;
    }
    const Vector& w1 = a.witness_first;
    const Vector& w2 = a.witness_second;
    bool witnesses = false, opposite = false;
    if (a.first == AltFirst::II) {
      // (ii) and (ii') hold; (i) and (i') must fail
      witnesses = in_cone(g.C, w1) && w1.norm() > 0 && in_interior(g.K, g.A.apply(w1)) && in_cone(g.K, g.A.apply(w2));
      opposite = system_I(g, 0.0) == SolveStatus::PrimalInfeasible;
      ++counts[0];
    } else if (a.second == AltSecond::IPrime) {
      // (i) and (i') hold; (ii) and (ii') must fail
      witnesses = in_cone(g.K, w1) && w1.norm() > 0 && in_cone(g.C, -g.A.adjoint_apply(w1)) &&
                  in_interior(g.C, -g.A.adjoint_apply(w2));
      opposite = system_II(g, 0.0) == SolveStatus::PrimalInfeasible;
      ++counts[1];
    } else {
      // (i) and (ii') hold; (ii) and (i') must fail
      witnesses = in_cone(g.K, w1) && w1.norm() > 0 && in_cone(g.C, -g.A.adjoint_apply(w1)) && in_cone(g.C, w2) &&
                  w2.norm() > 0 && in_cone(g.K, g.A.apply(w2));
      opposite = system_II(g, kStrict) == SolveStatus::PrimalInfeasible &&
                 system_I(g, kStrict) == SolveStatus::PrimalInfeasible;
      ++counts[2];
    }
    o.require(witnesses, "game " + std::to_string(t) + ": witness failed its membership test");
    o.require(opposite, "game " + std::to_string(t) + ": opposite system not certified infeasible");
    if (!o.pass) break;
  }
  if (o.pass) o.detail = fmt("(ii,ii') %g  (i,i') %g  (i,ii') %g", counts[0], counts[1], counts[2]);
  return o;
}

Outcome criterion8() {
  Outcome o;
  Rng rng(808);
  int agree = 0, total = 0, strict = 0;
  double worst = 0.0;
  const double tol = DiagnosisOptions{}.margin_tol;
  for (int t = 0; t < 100; ++t) {
    const ConicPair p = consistent_pair(rng, t < 40 ? 0 : t < 70 ? 1 : 2);
    const StrictFeasibility sp = strict_feasibility_P(p), sd = strict_feasibility_D(p);
    const double mp = direct_margin_P(p), md = direct_margin_D(p);
    for (auto [sf, direct] : {std::pair{sp, mp}, std::pair{sd, md}}) {
      ++total;
      if (sf.verdict == Verdict::Untested || std::isnan(direct)) continue;
      const Verdict want = direct > tol ? Verdict::Yes : Verdict::No;
      strict += want == Verdict::Yes;
      agree += sf.verdict == want;
      worst = std::max(worst, std::abs(sf.margin - direct));
    }
  }
  o.require(agree == total, fmt("verdicts agree on %g of %g", agree, total));
  o.require(worst <= 1e-6, fmt("margin difference %.3g", worst));
  if (o.pass) o.detail = fmt("%g/%g agree (%g strict),", agree, total, strict) + fmt(" max margin diff %.2g", worst);
  return o;
}

Outcome criterion9() {
  Outcome o;
  Rng rng(909);
  double pairing = 0.0, iso = 0.0, weak = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int r = support::uniform_int(rng, 1, 20), c = support::uniform_int(rng, 1, 20);
    const LinOp A = support::random_op(rng, r, c);
    const Vector x = support::random_vector(rng, c), y = support::random_vector(rng, r);
    const double lhs = dot(y, A.apply(x));
    pairing = std::max(pairing, std::abs(lhs - dot(A.adjoint_apply(y), x)) / (1.0 + std::abs(lhs)));
    const int m = support::uniform_int(rng, 1, 8);
    const Matrix M = support::random_sym(rng, m), N = support::random_sym(rng, m);
    const double tr = (M * N).trace();
    iso = std::max(iso, std::abs(dot(svec(M), svec(N)) - tr) / (1.0 + std::abs(tr)));
  }
  for (int t = 0; t < 500; ++t) {
    const auto w = support::random_pair(rng, t % 2 == 0);
    const double cx = dot(w.pair.c, w.x0), yb = dot(w.y0, w.pair.b);
    weak = std::min(weak, duality_gap(w.pair, w.x0, w.y0) / support::scale_of(cx, yb));
  }
  o.require(pairing <= 1e-12, fmt("pairing %.3g", pairing));
  o.require(iso <= 1e-12, fmt("isometry %.3g", iso));
  o.require(weak >= -1e-9, fmt("weak duality %.3g", weak));
  if (o.pass) o.detail = fmt("pairing %.2g, isometry %.2g, min scaled gap %.2g", pairing, iso, weak);
  return o;
}

Outcome criterion10() {
  Outcome o;
  struct Case {
    const char* name;
    Matrix p;
    std::function<double(double, double)> f;
  };
  const Case cases[] = {
      {"xy", poly(2, 2, {{1, 1, 1.0}}), [](double x, double y) { return x * y; }},
      {"x^2-y^2", poly(2, 2, {{2, 0, 1.0}, {0, 2, -1.0}}), [](double x, double y) { return x * x - y * y; }},
  };
  std::string detail;
  for (const Case& c : cases) {
    const double v = solve_game(polynomial_game(c.p)).value;
    const auto [lo, hi] = support::grid_value_interval(c.f, 1e-3);
    o.require(std::abs(v) <= 1e-5, std::string(c.name) + fmt(": value %.3g", v));
    o.require(lo - 1e-5 <= v && v <= hi + 1e-5, std::string(c.name) + fmt(": grid [%.3g, %.3g]", lo, hi));
    detail += std::string(c.name) + fmt(" %.2g ", v);
  }
  const double five = solve_game(polynomial_game(poly(0, 0, {{0, 0, 5.0}}))).value;
  o.require(five == 5.0, fmt("constant: value %.17g", five));
  if (o.pass) o.detail = detail + fmt("constant %.17g", five);
  return o;
}

}  // namespace

int main() {
  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9, criterion10};
  int failed = 0;
  for (int i = 0; i < 10; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d  %s  (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, o.detail.c_str(), secs);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
