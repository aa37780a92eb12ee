#pragma once

#include <iosfwd>
#include <string>

#include "jerkplan/instance.hpp"

namespace jerkplan {

/// Version tag written to and required in every instance file.
inline constexpr int kInstanceSchemaVersion = 1;

/// Parses the instance schema:
///
///   {"version": 1, "s_f": 60.0, "n": 100, "A": 2.78, "J": 0.5,
///    "u": [...]}                                   // explicit bounds, or
///   {"version": 1, "s_f": 60.0, "n": 100, "A": 1.39, "J": 0.5,
///    "curvature": [...], "v_max": 13.89, "A_N": 4.9} // curvature form
///
/// Throws std::invalid_argument on malformed input (missing fields, length
/// mismatch, unsupported version).
Instance instance_from_json(const std::string& text);
Instance read_instance(const std::string& path);

/// Always writes the explicit-bound form; "kind" is informational.
std::string instance_to_json(const Instance& inst, const std::string& kind = "");
void write_instance(const std::string& path, const Instance& inst,
                    const std::string& kind = "");

}  // namespace jerkplan
