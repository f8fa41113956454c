#pragma once

#include <string>

#include "ltlplan/decomposition.hpp"
#include "ltlplan/high_level.hpp"
#include "ltlplan/low_level.hpp"

namespace ltlplan {

std::string svg_decomposition(const CellGraph& g, const MapSpec& map);

/// Map plus per-stage allowed corridors in distinct colors.
std::string svg_plan(const CellGraph& g, const MapSpec& map,
                     const HighLevelPlan& plan);

/// Map (optionally with corridors) plus explored edges in light strokes and
/// the final path bold.
std::string svg_trajectory(const CellGraph& g, const MapSpec& map,
                           const Trajectory& traj, const PlannerDebug* debug,
                           const HighLevelPlan* plan);

}  // namespace ltlplan
