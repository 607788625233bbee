#pragma once

#include <string>

#include "gpplan/problem.hpp"

namespace gpplan {

/// Serializes a plan result to the trajectory JSON format:
/// {"times": [...], "states": [[...]], "upsampled": {"times", "states",
/// "clearance"}, "stats": {...}}. Doubles survive a round trip bit-exact.
std::string planResultToJson(const PlanResult& result);

/// Inverse of planResultToJson (stats are restored where present).
PlanResult planResultFromJson(const std::string& json_text);

void writeTextFile(const std::string& path, const std::string& content);
std::string readTextFile(const std::string& path);

}  // namespace gpplan
