#include "ltlplan/pipeline.hpp"

#include "ltlplan/errors.hpp"

namespace ltlplan {

PipelineResult plan_hierarchical(const MapSpec& map, const std::string& ltl_text,
                                 PlannerAlgo algo, const PlannerConfig& cfg,
                                 int inflation, PlannerDebug* debug) {
  PipelineResult out;
  out.formula = parse_ltl(ltl_text);
  out.dfa = compile_dfa(out.formula);
  out.graph = decompose(map);
  out.ts = build_ts(out.graph, map);

  const ProductSearchResult search = product_bfs(out.ts, out.dfa);
  if (!search.found)
    throw NoPlan("no plan: accepting DFA state unreachable (deepest stage "
                 "reached: " + std::to_string(search.best_stage) + ")",
                 search.best_stage);
  out.plan = extract_stages(search.path, out.dfa, out.graph, inflation);

  const Point start = map.start().rect.centroid();
  out.trajectory = plan_stages(out.plan, start, out.graph, cfg, algo, debug);
  return out;
}

GoalSchedule derive_goal_schedule(const Dfa& d, const CellGraph& g) {
  GoalSchedule gs;
  for (const auto& stage : d.stage_guards)
    gs.goals.emplace_back(stage.begin(), stage.end());
  gs.per_stage_excluded.assign(gs.goals.size(), {});
  if (d.safety) {
    const auto& [trigger, forbidden] = *d.safety;
    std::size_t trigger_stage = 0;
    for (; trigger_stage < gs.goals.size(); ++trigger_stage) {
      if (gs.goals[trigger_stage].count(trigger)) break;
    }
    std::set<int> forbidden_cells;
    for (const auto& c : g.cells) {
      if (c.free && c.atoms.count(forbidden)) forbidden_cells.insert(c.id);
    }
    for (std::size_t k = trigger_stage + 1; k < gs.goals.size(); ++k)
      gs.per_stage_excluded[k] = forbidden_cells;
  }
  return gs;
}

std::vector<LabelSet> waypoint_labels(const CellGraph& g, const Trajectory& traj) {
  std::vector<LabelSet> out;
  out.reserve(traj.waypoints.size());
  for (const auto& wp : traj.waypoints) {
    const auto& atoms = g.cells[wp.cell].atoms;
    out.emplace_back(atoms.begin(), atoms.end());
  }
  return out;
}

}  // namespace ltlplan
