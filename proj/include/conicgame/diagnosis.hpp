#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conicgame/reduction.hpp"

namespace conicgame {

enum class Verdict { Yes, No, Untested };
enum class DiagnosisCase { NonzeroValue, ZeroValueResolved, ZeroValuePathology };

std::string_view verdict_name(Verdict v);
std::string_view case_name(DiagnosisCase c);

struct DiagnosisOptions {
  SolveOptions solve;
  double value_tol = 1e-7;  // |v| <= value_tol counts as zero
  double meet_tol = 1e-6;   // 0 in [min, max] of <c,x> over the optimal set
  double delta = 1e-7;      // relaxation of the optimal-set constraint
  double margin_tol = 1e-7;
  double margin_radius = 1e4;  // <e, x> <= radius on a retry after Unknown; 0 disables
  double perturbation = 1e-8;
  std::optional<Vector> alpha;  // game weights; canonical interior points by default
  std::optional<Vector> beta;
};

struct StrictFeasibility {
  Verdict verdict = Verdict::Untested;
  double margin = 0.0;  // -kappa at the optimum of the margin program
  Vector witness;       // x (primal) or y (dual)
  Vector multiplier;    // link multiplier w (primal) or u (dual)
};

// min kappa s.t. x in C, Ax + kappa*beta_ref - b in K* (kappa >= -1);
// strictly feasible iff the optimum is below -margin_tol. An Unknown solve is
// retried with <e, x> <= margin_radius for the canonical interior point e.
StrictFeasibility strict_feasibility_P(const ConicPair& pair, const DiagnosisOptions& opts = {});
// Mirror on (D): c - A*y + kappa*alpha_ref in C*, y in K.
StrictFeasibility strict_feasibility_D(const ConicPair& pair, const DiagnosisOptions& opts = {});

struct NullspaceMeet {
  Verdict meets = Verdict::Untested;
  double lo = 0.0;
  double hi = 0.0;
  Vector witness;  // point of the optimal set with zero pairing when it meets
};

// Range of <c,x> over B^I = {x in S : Ax - v*beta in K*}.
NullspaceMeet optimal_set_meets_nullspace_I(const ConicGame& g, double v, const Vector& c,
                                            const DiagnosisOptions& opts = {});
// Range of <y,b> over B^II = {y in T : -A*y + v*alpha in C*}.
NullspaceMeet optimal_set_meets_nullspace_II(const ConicGame& g, double v, const Vector& b,
                                             const DiagnosisOptions& opts = {});

struct ValueEstimate {
  bool ok = false;
  double value = 0.0;
};

// val(P) from min <c + eps*alpha, x> over F(P), whose dual is strictly
// feasible; val(D) from max <y, b - eps*beta> over F(D).
ValueEstimate primal_value(const ConicPair& pair, const DiagnosisOptions& opts = {});
ValueEstimate dual_value(const ConicPair& pair, const DiagnosisOptions& opts = {});

struct Diagnosis {
  double game_value = 0.0;
  DiagnosisCase kase = DiagnosisCase::ZeroValuePathology;
  Verdict strict_P = Verdict::Untested;
  Verdict strict_D = Verdict::Untested;
  Verdict bI_meets_cperp = Verdict::Untested;
  Verdict bII_meets_bperp = Verdict::Untested;
  Vector x_witness;  // strictly feasible x, or the rescue point of (P)
  Vector y_witness;
  bool rescued = false;  // optimal strategies feasible with zero pairings: val(P) = val(D) = 0
  ValueEstimate val_P;
  ValueEstimate val_D;
  std::vector<std::string> notes;
};

Diagnosis classify(const ConicPair& pair, const DiagnosisOptions& opts = {});

// Game value with a tighter re-solve when |v| falls in the guard band (1e-9, 1e-5).
GameSolution solve_game_guarded(const ConicGame& g, const SolveOptions& opts = {});

enum class AltFirst { I, II };
enum class AltSecond { IPrime, IIPrime };

// (i)  exists y in K\{0}: -A*y in C*      (ii)  exists x in C\{0}: Ax in int K*
// (i') exists y in K\{0}: -A*y in int C*  (ii') exists x in C\{0}: Ax in K*
struct AlternativeVerdict {
  AltFirst first = AltFirst::I;
  AltSecond second = AltSecond::IIPrime;
  Vector witness_first;
  Vector witness_second;
  double value = 0.0;
};

std::string_view alt_name(AltFirst a);
std::string_view alt_name(AltSecond a);

// Throws SolverFailure when a witness fails its membership check.
AlternativeVerdict alternatives(const ConicGame& g, const DiagnosisOptions& opts = {});

}  // namespace conicgame
