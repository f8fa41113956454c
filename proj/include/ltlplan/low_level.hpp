#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "ltlplan/decomposition.hpp"
#include "ltlplan/high_level.hpp"
#include "ltlplan/rng.hpp"

namespace ltlplan {

struct PlannerConfig {
  int max_iterations = 5000;          // RRT iteration budget K
  double step_size = 0.5;             // RRT steering bound (delta q)
  int prm_nodes = 800;                // PRM roadmap size N
  int prm_neighbors = 8;              // PRM connection attempts k
  double goal_radius = 0.5;
  double edge_check_resolution = 0.1;
  std::uint64_t rng_seed = 0;
};

struct SamplePoint {
  Point position;
  int cell = -1;
};

struct Trajectory {
  std::vector<SamplePoint> waypoints;
  std::vector<std::size_t> stage_boundaries;  // index where each stage begins
};

enum class PlannerAlgo { Rrt, Prm };

/// Optional record of explored tree/roadmap edges, for rendering.
struct PlannerDebug {
  std::vector<std::pair<Point, Point>> edges;
};

/// Uniform over the union of the allowed cell rects: cell chosen with
/// probability proportional to area, then uniform within it.
SamplePoint sample_in_regions(const std::set<int>& allowed, const CellGraph& g,
                              Rng& rng);

/// A segment is valid when every interpolated point (spacing <= resolution)
/// lies in an allowed cell, the distinct cells met form an adjacency chain,
/// and the endpoint cells are equal or adjacent.
bool edge_valid(const SamplePoint& p1, const SamplePoint& p2,
                const std::set<int>& allowed, const CellGraph& g,
                double resolution);

std::vector<SamplePoint> rrt_plan(const Point& start,
                                  const std::set<std::string>& target_atoms,
                                  const std::set<int>& allowed, const CellGraph& g,
                                  const PlannerConfig& cfg, Rng& rng,
                                  PlannerDebug* debug = nullptr);

std::vector<SamplePoint> prm_plan(const Point& start,
                                  const std::set<std::string>& target_atoms,
                                  const std::set<int>& allowed, const CellGraph& g,
                                  const PlannerConfig& cfg, Rng& rng,
                                  PlannerDebug* debug = nullptr);

/// Runs the chosen planner per high-level stage; stage i+1 starts at stage
/// i's final waypoint. Each stage draws its own RNG stream from the config
/// seed and the stage index.
Trajectory plan_stages(const HighLevelPlan& plan, const Point& start,
                       const CellGraph& g, const PlannerConfig& cfg,
                       PlannerAlgo algo, PlannerDebug* debug = nullptr);

/// Goal scheduling without a high-level plan: one single-atom goal per stage,
/// sampling over all free cells minus that stage's excluded set.
Trajectory goal_schedule_plan(const std::vector<std::set<std::string>>& goals,
                              const std::vector<std::set<int>>& per_stage_excluded,
                              const Point& start, const CellGraph& g,
                              const PlannerConfig& cfg, PlannerAlgo algo,
                              PlannerDebug* debug = nullptr);

std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text, const CellGraph& g);

}  // namespace ltlplan
