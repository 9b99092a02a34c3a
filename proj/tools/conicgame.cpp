#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conicgame/diagnosis.hpp"
#include "conicgame/instances.hpp"
#include "conicgame/io.hpp"

using namespace conicgame;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kInfeasible = 2, kUnknown = 3, kInput = 4 };

json to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
  }
}

void emit(const json& j, const std::string& out) { emit(j.dump(2) + "\n", out); }

SolveOptions solve_options(double tol, int max_iter, bool verbose) {
  if (!(tol > 0.0) || max_iter <= 0) throw InputError("--tol and --max-iter must be positive");
  SolveOptions o;
  o.feas_tol = tol;
  o.gap_tol = tol;
  o.max_iter = max_iter;
  o.verbose = verbose;
  return o;
}

std::vector<double> numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + tok + "'");
    }
  }
  return out;
}

// "a,b/c,d" (or "a,b;c,d") -> rows separated by '/', entries by ','.
Matrix matrix_param(std::string s) {
  std::replace(s.begin(), s.end(), ';', '/');
  std::vector<std::vector<double>> rows;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, '/')) rows.push_back(numbers(row));
  if (rows.empty() || rows[0].empty()) throw InputError("empty matrix parameter");
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw InputError("ragged matrix parameter");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::map<std::string, std::string> key_values(const std::vector<std::string>& params) {
  std::map<std::string, std::string> kv;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--param expects k=v, got '" + p + "'");
    kv[p.substr(0, eq)] = p.substr(eq + 1);
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw InputError("missing --param " + key + "=...");
  return it->second;
}

int int_param(const std::map<std::string, std::string>& kv, const std::string& key) {
  const auto v = numbers(need(kv, key));
  if (v.size() != 1 || v[0] != static_cast<int>(v[0])) throw InputError("--param " + key + " must be an integer");
  return static_cast<int>(v[0]);
}

std::string instance_text(const std::string& family, const std::map<std::string, std::string>& kv) {
  if (family == "matrix") return serialize_problem(problem_from(matrix_game(matrix_param(need(kv, "R")))));
  if (family == "sdp") {
    return serialize_problem(problem_from(sdp_game(numbers(need(kv, "T")), int_param(kv, "m"), int_param(kv, "n"))));
  }
  if (family == "polynomial") return serialize_problem(problem_from(polynomial_game(matrix_param(need(kv, "p")))));
  if (family == "example44") {
    const std::string variant = kv.count("variant") ? kv.at("variant") : "original";
    Example44 e;
    if (variant == "original") {
      e = example44(Example44Variant::Original);
    } else if (variant == "rho") {
      e = example44(Example44Variant::Rho, numbers(need(kv, "rho")).at(0));
    } else if (variant == "sigma") {
      e = example44(Example44Variant::Sigma, numbers(need(kv, "sigma")).at(0));
    } else {
      throw InputError("unknown example44 variant '" + variant + "'");
    }
    return serialize_problem(problem_from(e.game, e.pair));
  }
  throw InputError("unknown family '" + family + "'");
}

int cmd_solve(const std::string& file, const SolveOptions& opts, const std::string& out) {
  const ConicGame g = game_from(parse_problem(read_text(file)));
  const GameSolution s = solve_game(g, opts);
  json j;
  j["value"] = s.value;
  j["x_star"] = to_json(s.x_star);
  j["y_star"] = to_json(s.y_star);
  j["lambda"] = s.params.lambda;
  j["kappa"] = s.params.kappa;
  j["residuals"] = {{"I", s.check.residual_I}, {"II", s.check.residual_II}};
  j["iterations"] = s.iterations;
  emit(j, out);
  return kOk;
}

int cmd_solve_pair(const std::string& file, const SolveOptions& opts, const std::string& out) {
  const ConicPair p = pair_from(parse_problem(read_text(file)));
  const PairSolution s = solve_pair(p, opts);
  json j;
  j["status"] = status_name(s.status);
  j["primal_obj"] = s.primal_obj;
  j["dual_obj"] = s.dual_obj;
  j["x"] = to_json(s.x);
  j["y"] = to_json(s.y);
  if (p.linked()) {
    j["w"] = to_json(s.w);
    j["u"] = to_json(s.u);
  }
  j["iterations"] = s.raw.iterations;
  emit(j, out);
  switch (s.status) {
    case SolveStatus::Optimal:
      return kOk;
    case SolveStatus::Unknown:
      return kUnknown;
    default:
      return kInfeasible;
  }
}

json estimate_json(const ValueEstimate& e) { return e.ok ? json(e.value) : json(nullptr); }

int cmd_diagnose(const std::string& file, const std::string& alpha, const std::string& beta, const SolveOptions& so,
                 const std::string& out) {
  const ConicPair p = pair_from(parse_problem(read_text(file)));
  DiagnosisOptions opts;
  opts.solve = so;
  if (!alpha.empty()) opts.alpha = parse_point(read_text(alpha), "alpha");
  if (!beta.empty()) opts.beta = parse_point(read_text(beta), "beta");
  const Diagnosis d = classify(p, opts);
  json j;
  j["case"] = case_name(d.kase);
  j["game_value"] = d.game_value;
  j["strict_P"] = verdict_name(d.strict_P);
  j["strict_D"] = verdict_name(d.strict_D);
  j["bI_meets_cperp"] = verdict_name(d.bI_meets_cperp);
  j["bII_meets_bperp"] = verdict_name(d.bII_meets_bperp);
  j["rescued"] = d.rescued;
  j["val_P"] = estimate_json(d.val_P);
  j["val_D"] = estimate_json(d.val_D);
  if (d.x_witness.size() > 0) j["x_witness"] = to_json(d.x_witness);
  if (d.y_witness.size() > 0) j["y_witness"] = to_json(d.y_witness);
  j["notes"] = d.notes;
  emit(j, out);
  return d.kase == DiagnosisCase::ZeroValuePathology ? kInfeasible : kOk;
}

int cmd_verify(const std::string& file, const std::string& xf, const std::string& yf, double tol,
               const std::string& out) {
  const ConicGame g = game_from(parse_problem(read_text(file)));
  const Vector x = parse_point(read_text(xf), "x_star");
  const Vector y = parse_point(read_text(yf), "y_star");
  require_dim(g.C, x, "x");
  require_dim(g.K, y, "y");
  const EquilibriumCheck c = verify_equilibrium(g, x, y, tol);
  json j;
  j["ok"] = c.ok;
  j["v_hat"] = c.v_hat;
  j["residual_I"] = c.residual_I;
  j["residual_II"] = c.residual_II;
  j["x_in_base"] = in_base_I(g, x);
  j["y_in_base"] = in_base_II(g, y);
  emit(j, out);
  return c.ok ? kOk : kInfeasible;
}

int cmd_reduce(const std::string& file, double lambda, double kappa, const SolveOptions& opts,
               const std::string& out) {
  const ConicGame g = game_from(parse_problem(read_text(file)));
  ReductionParams params;
  if (lambda > 0.0 && kappa > 0.0) {
    params = {lambda, kappa};
  } else if (lambda > 0.0 || kappa > 0.0) {
    throw InputError("--lambda and --kappa go together");
  } else {
    params = choose_params(g, opts);
  }
  emit(serialize_problem(problem_from(build_shifted_pair(g, params))), out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-sum games on cone bases and conic linear programs"};
  app.require_subcommand(1);

  std::string game, pair, out, xf, yf, alpha, beta, family;
  double tol = 1e-8, verify_tol = 1e-6, lambda = 0.0, kappa = 0.0;
  int max_iter = 200;
  bool verbose = false;
  std::vector<std::string> params;

  auto solver_flags = [&](CLI::App* c) {
    c->add_option("--tol", tol, "feasibility and gap tolerance");
    c->add_option("--max-iter", max_iter, "interior-point iteration limit");
    c->add_flag("--verbose", verbose, "iteration log on stderr");
    c->add_option("--out", out, "output file (default stdout)");
  };

  auto* solve = app.add_subcommand("solve", "value and saddle point of a game");
  solve->add_option("--game", game)->required();
  solver_flags(solve);

  auto* solve_pair_cmd = app.add_subcommand("solve-pair", "solve a primal-dual conic pair");
  solve_pair_cmd->add_option("--pair", pair)->required();
  solver_flags(solve_pair_cmd);

  auto* diagnose = app.add_subcommand("diagnose", "strict feasibility and duality gap of a pair");
  diagnose->add_option("--pair", pair)->required();
  diagnose->add_option("--alpha", alpha, "point file with the game weight on C");
  diagnose->add_option("--beta", beta, "point file with the game weight on K");
  solver_flags(diagnose);

  auto* verify = app.add_subcommand("verify", "check a candidate equilibrium");
  verify->add_option("--game", game)->required();
  verify->add_option("--x", xf)->required();
  verify->add_option("--y", yf)->required();
  verify->add_option("--check-tol", verify_tol, "equilibrium residual tolerance");
  verify->add_option("--out", out);

  auto* reduce = app.add_subcommand("reduce", "emit the shifted pair of a game");
  reduce->add_option("--game", game)->required();
  reduce->add_option("--lambda", lambda);
  reduce->add_option("--kappa", kappa);
  solver_flags(reduce);

  auto* instance = app.add_subcommand("instance", "write a game or pair file");
  instance->add_option("--family", family)->required()->check(CLI::IsMember({"matrix", "sdp", "polynomial", "example44"}));
  instance->add_option("--param", params, "k=v; matrices as 'a,b/c,d'");
  instance->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*instance) {
      emit(instance_text(family, key_values(params)), out);
      return kOk;
    }
    if (*verify) return cmd_verify(game, xf, yf, verify_tol, out);
    const SolveOptions opts = solve_options(tol, max_iter, verbose);
    if (*solve) return cmd_solve(game, opts, out);
    if (*solve_pair_cmd) return cmd_solve_pair(pair, opts, out);
    if (*diagnose) return cmd_diagnose(pair, alpha, beta, opts, out);
    if (*reduce) return cmd_reduce(game, lambda, kappa, opts, out);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInput;
  } catch (const SolverFailure& e) {
    std::fprintf(stderr, "solver: %s (%s)\n", e.what(), std::string(status_name(e.status)).c_str());
    return kUnknown;
  }
  return kInput;
}
