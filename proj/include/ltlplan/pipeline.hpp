#pragma once

#include <string>

#include "ltlplan/high_level.hpp"
#include "ltlplan/kinematics.hpp"
#include "ltlplan/low_level.hpp"

namespace ltlplan {

struct PipelineResult {
  CellGraph graph;
  TransitionSystem ts;
  Formula formula;
  Dfa dfa;
  HighLevelPlan plan;
  Trajectory trajectory;
};

/// Full hierarchical pipeline: parse, compile, decompose, product BFS,
/// per-stage sampling. Throws NoPlan when no accepting product state is
/// reachable and PlanFailure (tagged with the stage index) when a sampling
/// stage gives up.
PipelineResult plan_hierarchical(const MapSpec& map, const std::string& ltl_text,
                                 PlannerAlgo algo, const PlannerConfig& cfg,
                                 int inflation = 1, PlannerDebug* debug = nullptr);

struct GoalSchedule {
  std::vector<std::set<std::string>> goals;
  std::vector<std::set<int>> per_stage_excluded;
};

/// Derives the goal-scheduling inputs from a formula: one stage per task
/// stage, with forbidden-atom cells excluded from every stage after the
/// safety trigger's stage. Stages with disjunctive goals are passed through
/// and rejected by goal_schedule_plan.
GoalSchedule derive_goal_schedule(const Dfa& d, const CellGraph& g);

/// Label trace of a trajectory's waypoint cells.
std::vector<LabelSet> waypoint_labels(const CellGraph& g, const Trajectory& traj);

}  // namespace ltlplan
