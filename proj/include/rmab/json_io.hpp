#pragma once

#include <string>

#include "json.hpp"
#include "rmab/instance.hpp"
#include "rmab/instance_lab.hpp"
#include "rmab/lp_relaxation.hpp"
#include "rmab/simulator.hpp"

namespace rmab {

using Json = nlohmann::json;

Json instance_to_json(const Instance& inst);
// Throws kInvalidInstance on malformed documents or validation failures.
Instance instance_from_json(const Json& j);

// A builtin name, or a path to an instance document.
Instance load_instance(const std::string& name_or_path);

Json lp_to_json(const LpSolution& lp);
Json certificate_to_json(const Certificate& c);
Json stats_to_json(const TrajectoryStats& s);

}  // namespace rmab
