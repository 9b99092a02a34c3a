#include "conicgame/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace conicgame {

namespace {

using json = nlohmann::ordered_json;

json cones_json(const ConeProduct& k) {
  json arr = json::array();
  for (const auto& b : k.blocks()) {
    arr.push_back({{"kind", b.kind == BlockKind::Orthant ? "orthant" : "psd"}, {"size", b.size}});
  }
  return arr;
}

json vector_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json op_json(const LinOp& op) {
  json data = json::array();
  for (Eigen::Index r = 0; r < op.rows(); ++r)
    for (Eigen::Index c = 0; c < op.cols(); ++c) data.push_back(op(r, c));
  return {{"rows", op.rows()}, {"cols", op.cols()}, {"data", std::move(data)}};
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("problem file: missing field '") + key + "'");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string("problem file: non-numeric entry in ") + what);
  return j.get<double>();
}

int positive_int(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw InputError(std::string("problem file: '") + what + "' must be a non-negative integer");
  }
  return j.get<int>();
}

ConeProduct parse_cones(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string("problem file: '") + what + "' must be a non-empty list");
  std::vector<ConeBlock> blocks;
  for (const auto& b : j) {
    if (!b.is_object()) throw InputError("problem file: cone blocks must be objects");
    const auto& kind = field(b, "kind");
    if (!kind.is_string()) throw InputError("problem file: cone kind must be a string");
    const std::string k = kind.get<std::string>();
    const int size = positive_int(field(b, "size"), "size");
    if (k == "orthant") {
      blocks.push_back(ConeBlock::orthant(size));
    } else if (k == "psd") {
      blocks.push_back(ConeBlock::psd(size));
    } else {
      throw InputError("problem file: unknown cone kind '" + k + "'");
    }
  }
  return ConeProduct(std::move(blocks));
}

Vector parse_vector(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string("problem file: '") + what + "' must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

LinOp parse_op(const json& j, const char* what) {
  if (!j.is_object()) throw InputError(std::string("problem file: '") + what + "' must be an object");
  const int rows = positive_int(field(j, "rows"), "rows");
  const int cols = positive_int(field(j, "cols"), "cols");
  const Vector data = parse_vector(field(j, "data"), what);
  return LinOp(rows, cols, std::vector<double>(data.data(), data.data() + data.size()));
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

ProblemFile parse_problem(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw InputError("problem file: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"cones_C", "cones_K", "alpha", "beta", "operator", "b", "c", "link_C", "link_K"};
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known)) {
      throw InputError("problem file: unknown field '" + it.key() + "'");
    }
  }
  ProblemFile f;
  f.C = parse_cones(field(j, "cones_C"), "cones_C");
  f.K = parse_cones(field(j, "cones_K"), "cones_K");
  f.A = parse_op(field(j, "operator"), "operator");
  if (f.A.rows() != f.K.total_dim() || f.A.cols() != f.C.total_dim()) {
    throw InputError("problem file: operator shape does not match the cones");
  }
  auto opt_vec = [&](const char* key, const ConeProduct& k) -> std::optional<Vector> {
    if (!j.contains(key)) return std::nullopt;
    Vector v = parse_vector(j.at(key), key);
    require_dim(k, v, key);
    return v;
  };
  f.alpha = opt_vec("alpha", f.C);
  f.beta = opt_vec("beta", f.K);
  f.b = opt_vec("b", f.K);
  f.c = opt_vec("c", f.C);
  f.link_C = j.contains("link_C") ? parse_op(j.at("link_C"), "link_C") : LinOp(0, f.C.total_dim());
  f.link_K = j.contains("link_K") ? parse_op(j.at("link_K"), "link_K") : LinOp(0, f.K.total_dim());
  if (f.link_C.cols() != f.C.total_dim() || f.link_K.cols() != f.K.total_dim()) {
    throw InputError("problem file: link operator shape does not match the cones");
  }
  return f;
}

std::string serialize_problem(const ProblemFile& f) {
  json j;
  j["cones_C"] = cones_json(f.C);
  j["cones_K"] = cones_json(f.K);
  if (f.alpha) j["alpha"] = vector_json(*f.alpha);
  if (f.beta) j["beta"] = vector_json(*f.beta);
  j["operator"] = op_json(f.A);
  if (f.b) j["b"] = vector_json(*f.b);
  if (f.c) j["c"] = vector_json(*f.c);
  if (f.link_C.rows() > 0) j["link_C"] = op_json(f.link_C);
  if (f.link_K.rows() > 0) j["link_K"] = op_json(f.link_K);
  return j.dump() + "\n";
}

ProblemFile problem_from(const ConicGame& g) {
  ProblemFile f;
  f.C = g.C;
  f.K = g.K;
  f.A = g.A;
  f.alpha = g.alpha;
  f.beta = g.beta;
  f.link_C = g.link_C;
  f.link_K = g.link_K;
  return f;
}

ProblemFile problem_from(const ConicPair& p) {
  ProblemFile f;
  f.C = p.C;
  f.K = p.K;
  f.A = p.A;
  f.b = p.b;
  f.c = p.c;
  f.link_C = p.link_C;
  f.link_K = p.link_K;
  return f;
}

ProblemFile problem_from(const ConicGame& g, const ConicPair& p) {
  if (!(g.C == p.C) || !(g.K == p.K) || !(g.A == p.A)) throw InputError("game and pair do not share cones and operator");
  ProblemFile f = problem_from(g);
  f.b = p.b;
  f.c = p.c;
  return f;
}

ConicGame game_from(const ProblemFile& f) {
  if (!f.alpha || !f.beta) throw InputError("problem file: a game needs 'alpha' and 'beta'");
  ConicGame g;
  g.C = f.C;
  g.K = f.K;
  g.alpha = *f.alpha;
  g.beta = *f.beta;
  g.A = f.A;
  g.link_C = f.link_C;
  g.link_K = f.link_K;
  g.validate();
  return g;
}

ConicPair pair_from(const ProblemFile& f) {
  if (!f.b || !f.c) throw InputError("problem file: a pair needs 'b' and 'c'");
  ConicPair p(f.C, f.K, f.A, *f.b, *f.c);
  p.link_C = f.link_C;
  p.link_K = f.link_K;
  p.validate();
  return p;
}

Vector parse_point(std::string_view text, const std::string& key) {
  const json j = parse_json(text);
  if (j.is_array()) return parse_vector(j, "point");
  if (j.is_object() && !key.empty() && j.contains(key)) return parse_vector(j.at(key), key.c_str());
  if (j.is_object() && j.size() == 1 && j.begin()->is_array()) return parse_vector(*j.begin(), "point");
  throw InputError("point file: expected an array or an object with one array");
}

std::string serialize_point(const Vector& v) { return vector_json(v).dump() + "\n"; }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

}  // namespace conicgame
