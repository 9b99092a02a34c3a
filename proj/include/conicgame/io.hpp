#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "conicgame/game.hpp"

namespace conicgame {

// One problem record: cones and operator plus whichever of the game weights
// (alpha, beta) and pair data (b, c) are present. Links are optional.
//
//   {"cones_C":[{"kind":"orthant","size":2}],"cones_K":[{"kind":"psd","size":3}],
//    "alpha":[...],"beta":[...],"operator":{"rows":6,"cols":2,"data":[...]},
//    "b":[...],"c":[...],"link_C":{...},"link_K":{...}}
struct ProblemFile {
  ConeProduct C;
  ConeProduct K;
  LinOp A;
  std::optional<Vector> alpha, beta, b, c;
  LinOp link_C;  // 0 rows when absent
  LinOp link_K;
};

ProblemFile parse_problem(std::string_view text);
// Canonical text: fixed key order, shortest round-trip numbers, trailing newline.
std::string serialize_problem(const ProblemFile& f);

ProblemFile problem_from(const ConicGame& g);
ProblemFile problem_from(const ConicPair& p);
ProblemFile problem_from(const ConicGame& g, const ConicPair& p);

// Throw InputError when the needed fields are missing.
ConicGame game_from(const ProblemFile& f);
ConicPair pair_from(const ProblemFile& f);

// A JSON array, an object whose field `key` is an array, or an object holding
// exactly one array.
Vector parse_point(std::string_view text, const std::string& key = "");
std::string serialize_point(const Vector& v);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace conicgame
