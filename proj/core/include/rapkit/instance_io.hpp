#pragma once

#include "rapkit/apps.hpp"
#include "rapkit/model.hpp"

namespace rapkit {

// JSON instance files:
// {
//   "objective":   {"type": "quadratic" | "catalog", "a": [...], "b": [...],
//                   "f": "exp", "f_params": {"M": 1.5}},
//   "constraints": {"kind": "box"|"gbc"|"nested"|"laminar", "R": num,
//                   "l": [...], "u": [...], "sets": [[1-based indices]...],
//                   "L": [...], "U": [...]},
//   "domain":      "continuous" | "integer"
// }
// Missing or null bounds mean unbounded. Emission round-trips doubles
// bit-exactly; parse(emit(x)) is the identity.
Instance parse_instance(const std::string& json_text);
std::string emit_instance(const Instance& inst);

std::string emit_solution(const Solution& sol, double wall_ms);

// Reads "x" from a solution file (either a solver result object or a bare
// {"x": [...]}).
std::vector<double> parse_solution_vector(const std::string& json_text);

// Application input files and recovery descriptors for the transform /
// recover pipeline. The descriptor embeds the app name and its spec so a
// solved instance can be mapped back without the original file.
struct TransformResult {
  Instance inst;
  std::string recovery_json;
};

TransformResult transform_app(const std::string& app_name, const std::string& spec_json);

// Maps a solution back through a recovery descriptor; returns a JSON report.
std::string recover_app(const std::string& recovery_json, const std::vector<double>& x);

}  // namespace rapkit
