#include "ltlplan/low_level.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <sstream>

#include "ltlplan/errors.hpp"

namespace ltlplan {

SamplePoint sample_in_regions(const std::set<int>& allowed, const CellGraph& g,
                              Rng& rng) {
  if (allowed.empty()) throw EmptyAllowedSet();
  std::vector<int> ids(allowed.begin(), allowed.end());
  std::vector<double> cumulative;
  cumulative.reserve(ids.size());
  double total = 0.0;
  for (int id : ids) {
    total += g.cells[id].rect.area();
    cumulative.push_back(total);
  }
  const double u = rng.uniform() * total;
  const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
  const int id = ids[std::min<std::size_t>(it - cumulative.begin(), ids.size() - 1)];
  const Rect& r = g.cells[id].rect;
  SamplePoint sp;
  sp.position = {rng.uniform(r.x_min, r.x_max), rng.uniform(r.y_min, r.y_max)};
  sp.cell = id;
  return sp;
}

bool edge_valid(const SamplePoint& p1, const SamplePoint& p2,
                const std::set<int>& allowed, const CellGraph& g,
                double resolution) {
  if (p1.cell != p2.cell && !g.adjacent(p1.cell, p2.cell)) return false;
  const double len = distance(p1.position, p2.position);
  const int n = std::max(1, static_cast<int>(std::ceil(len / resolution)));
  int prev = -1;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const Point p{p1.position.x + t * (p2.position.x - p1.position.x),
                  p1.position.y + t * (p2.position.y - p1.position.y)};
    const auto cell = locate_cell(g, p);
    if (!cell || !allowed.count(*cell)) return false;
    if (prev >= 0 && *cell != prev && !g.adjacent(prev, *cell)) return false;
    prev = *cell;
  }
  return true;
}

namespace {

bool carries_target(const Cell& c, const std::set<std::string>& target_atoms) {
  return std::any_of(target_atoms.begin(), target_atoms.end(),
                     [&](const std::string& a) { return c.atoms.count(a) > 0; });
}

/// Walks from `from` to `to` along an already-validated segment, emitting
/// intermediate waypoints at every cell crossing and at most step_size apart,
/// so trajectory invariants hold on the appended piece.
void append_segment(std::vector<SamplePoint>& out, const SamplePoint& from,
                    const SamplePoint& to, const CellGraph& g, double step_size,
                    double resolution) {
  const double len = distance(from.position, to.position);
  if (len == 0.0) return;
  const int n = std::max(1, static_cast<int>(std::ceil(len / resolution)));
  SamplePoint last = from;
  for (int i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const Point p{from.position.x + t * (to.position.x - from.position.x),
                  from.position.y + t * (to.position.y - from.position.y)};
    const int cell = *locate_cell(g, p);
    const double since = distance(last.position, p);
    const bool crossing = cell != last.cell;
    const bool step_full = since + len / n > step_size;
    if (i == n || crossing || step_full) {
      out.push_back({p, cell});
      last = out.back();
    }
  }
}

int nearest_target_cell(const std::set<std::string>& target_atoms,
                        const std::set<int>& allowed, const CellGraph& g,
                        const Point& from) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int id : allowed) {
    if (!carries_target(g.cells[id], target_atoms)) continue;
    const double d = distance(from, g.cells[id].rect.centroid());
    if (d < best_d) {
      best_d = d;
      best = id;
    }
  }
  return best;
}

}  // namespace

std::vector<SamplePoint> rrt_plan(const Point& start,
                                  const std::set<std::string>& target_atoms,
                                  const std::set<int>& allowed, const CellGraph& g,
                                  const PlannerConfig& cfg, Rng& rng,
                                  PlannerDebug* debug) {
  const auto start_cell = locate_cell(g, start);
  if (!start_cell || !allowed.count(*start_cell))
    throw PlanFailure("rrt: start point is not in the allowed set");

  std::vector<SamplePoint> nodes{{start, *start_cell}};
  std::vector<int> parent{-1};

  auto backtrack = [&](int idx) {
    std::vector<SamplePoint> path;
    for (int i = idx; i >= 0; i = parent[i]) path.push_back(nodes[i]);
    std::reverse(path.begin(), path.end());
    return path;
  };

  // Goal rule: a node whose cell carries a target atom connects straight to
  // that cell's centroid when the connection is valid.
  auto try_goal = [&](int idx) -> std::optional<std::vector<SamplePoint>> {
    const SamplePoint& node = nodes[idx];
    if (!carries_target(g.cells[node.cell], target_atoms)) return std::nullopt;
    const SamplePoint goal{g.cells[node.cell].rect.centroid(), node.cell};
    if (!edge_valid(node, goal, allowed, g, cfg.edge_check_resolution))
      return std::nullopt;
    auto path = backtrack(idx);
    append_segment(path, node, goal, g, cfg.step_size, cfg.edge_check_resolution);
    return path;
  };

  if (auto path = try_goal(0)) return *path;

  for (int k = 0; k < cfg.max_iterations; ++k) {
    const SamplePoint sample = sample_in_regions(allowed, g, rng);

    int nearest = 0;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double d = distance(nodes[i].position, sample.position);
      if (d < nearest_d) {
        nearest_d = d;
        nearest = static_cast<int>(i);
      }
    }
    if (nearest_d == 0.0) continue;

    const double step = std::min(cfg.step_size, nearest_d);
    const Point dir{(sample.position.x - nodes[nearest].position.x) / nearest_d,
                    (sample.position.y - nodes[nearest].position.y) / nearest_d};
    const Point pos{nodes[nearest].position.x + step * dir.x,
                    nodes[nearest].position.y + step * dir.y};
    const auto cell = locate_cell(g, pos);
    if (!cell || !allowed.count(*cell)) continue;
    const SamplePoint candidate{pos, *cell};
    if (!edge_valid(nodes[nearest], candidate, allowed, g, cfg.edge_check_resolution))
      continue;

    nodes.push_back(candidate);
    parent.push_back(nearest);
    if (debug) debug->edges.emplace_back(nodes[nearest].position, pos);
    if (auto path = try_goal(static_cast<int>(nodes.size()) - 1)) return *path;
  }
  throw PlanFailure("rrt: no path after " + std::to_string(cfg.max_iterations) +
                    " iterations");
}

std::vector<SamplePoint> prm_plan(const Point& start,
                                  const std::set<std::string>& target_atoms,
                                  const std::set<int>& allowed, const CellGraph& g,
                                  const PlannerConfig& cfg, Rng& rng,
                                  PlannerDebug* debug) {
  const auto start_cell = locate_cell(g, start);
  if (!start_cell || !allowed.count(*start_cell))
    throw PlanFailure("prm: start point is not in the allowed set");

  const int goal_cell = nearest_target_cell(target_atoms, allowed, g, start);
  if (goal_cell < 0) throw PlanFailure("prm: no allowed cell carries a target atom");
  const SamplePoint goal{g.cells[goal_cell].rect.centroid(), goal_cell};

  std::vector<SamplePoint> nodes;
  std::vector<std::vector<std::pair<int, double>>> adj;
  auto connect = [&](int a, int b) {
    const double w = distance(nodes[a].position, nodes[b].position);
    adj[a].emplace_back(b, w);
    adj[b].emplace_back(a, w);
    if (debug) debug->edges.emplace_back(nodes[a].position, nodes[b].position);
  };
  auto link_to_roadmap = [&](int idx, int limit) {
    std::vector<std::pair<double, int>> order;
    for (int i = 0; i < limit; ++i) {
      if (i == idx) continue;
      order.emplace_back(distance(nodes[idx].position, nodes[i].position), i);
    }
    std::sort(order.begin(), order.end());
    const int k = std::min<int>(cfg.prm_neighbors, static_cast<int>(order.size()));
    for (int i = 0; i < k; ++i) {
      const int other = order[i].second;
      if (edge_valid(nodes[idx], nodes[other], allowed, g, cfg.edge_check_resolution))
        connect(idx, other);
    }
  };

  for (int i = 0; i < cfg.prm_nodes; ++i) {
    nodes.push_back(sample_in_regions(allowed, g, rng));
    adj.emplace_back();
    link_to_roadmap(i, i);
  }
  const int start_idx = static_cast<int>(nodes.size());
  nodes.push_back({start, *start_cell});
  adj.emplace_back();
  link_to_roadmap(start_idx, start_idx);
  const int goal_idx = static_cast<int>(nodes.size());
  nodes.push_back(goal);
  adj.emplace_back();
  link_to_roadmap(goal_idx, goal_idx - 1);  // candidates: roadmap nodes only

  // Dijkstra over Euclidean edge lengths.
  std::vector<double> dist(nodes.size(), std::numeric_limits<double>::infinity());
  std::vector<int> prev(nodes.size(), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  dist[start_idx] = 0.0;
  pq.emplace(0.0, start_idx);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == goal_idx) break;
    for (const auto& [v, w] : adj[u]) {
      if (dist[u] + w < dist[v]) {
        dist[v] = dist[u] + w;
        prev[v] = u;
        pq.emplace(dist[v], v);
      }
    }
  }
  if (!std::isfinite(dist[goal_idx]))
    throw PlanFailure("prm: start and goal are in different roadmap components");

  std::vector<SamplePoint> path;
  for (int v = goal_idx; v >= 0; v = prev[v]) path.push_back(nodes[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

Trajectory run_stage_loop(const std::vector<std::set<int>>& allowed_sets,
                          const std::vector<std::set<std::string>>& targets,
                          const Point& start, const CellGraph& g,
                          const PlannerConfig& cfg, PlannerAlgo algo,
                          PlannerDebug* debug) {
  Trajectory traj;
  Point cursor = start;
  for (std::size_t k = 0; k < allowed_sets.size(); ++k) {
    Rng rng(Rng::derive(cfg.rng_seed, k));
    std::vector<SamplePoint> sub;
    try {
      sub = algo == PlannerAlgo::Rrt
                ? rrt_plan(cursor, targets[k], allowed_sets[k], g, cfg, rng, debug)
                : prm_plan(cursor, targets[k], allowed_sets[k], g, cfg, rng, debug);
    } catch (const PlanFailure& e) {
      throw PlanFailure(e.what(), static_cast<int>(k));
    }
    const std::size_t skip = k == 0 ? 0 : 1;  // stage start repeats previous end
    traj.stage_boundaries.push_back(traj.waypoints.size());
    traj.waypoints.insert(traj.waypoints.end(), sub.begin() + skip, sub.end());
    cursor = traj.waypoints.back().position;
  }
  return traj;
}

}  // namespace

Trajectory plan_stages(const HighLevelPlan& plan, const Point& start,
                       const CellGraph& g, const PlannerConfig& cfg,
                       PlannerAlgo algo, PlannerDebug* debug) {
  std::vector<std::set<int>> allowed_sets;
  std::vector<std::set<std::string>> targets;
  for (const auto& s : plan.stages) {
    allowed_sets.push_back(s.allowed);
    targets.push_back(s.target_atoms);
  }
  return run_stage_loop(allowed_sets, targets, start, g, cfg, algo, debug);
}

Trajectory goal_schedule_plan(const std::vector<std::set<std::string>>& goals,
                              const std::vector<std::set<int>>& per_stage_excluded,
                              const Point& start, const CellGraph& g,
                              const PlannerConfig& cfg, PlannerAlgo algo,
                              PlannerDebug* debug) {
  for (const auto& goal : goals) {
    if (goal.size() != 1)
      throw UnsupportedTask(
          "goal scheduling needs one goal atom per stage (strict sequence)");
  }
  std::set<int> free_cells;
  for (const auto& c : g.cells)
    if (c.free) free_cells.insert(c.id);

  std::vector<std::set<int>> allowed_sets;
  for (std::size_t k = 0; k < goals.size(); ++k) {
    std::set<int> allowed = free_cells;
    if (k < per_stage_excluded.size()) {
      for (int id : per_stage_excluded[k]) allowed.erase(id);
    }
    allowed_sets.push_back(std::move(allowed));
  }
  return run_stage_loop(allowed_sets, goals, start, g, cfg, algo, debug);
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "stage,index,x,y,cell_id\n";
  char buf[64];
  for (std::size_t i = 0; i < traj.waypoints.size(); ++i) {
    std::size_t stage = 0;
    for (std::size_t k = 0; k < traj.stage_boundaries.size(); ++k) {
      if (traj.stage_boundaries[k] <= i) stage = k;
    }
    const auto& wp = traj.waypoints[i];
    out << stage << ',' << i << ',';
    std::snprintf(buf, sizeof buf, "%.17g", wp.position.x);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", wp.position.y);
    out << buf << ',' << wp.cell << '\n';
  }
  return out.str();
}

Trajectory trajectory_from_csv(const std::string& text, const CellGraph& g) {
  Trajectory traj;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "stage,index,x,y,cell_id")
    throw ParseError("trajectory CSV: bad header");
  std::size_t last_stage = 0;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::size_t stage, index;
    double x, y;
    int cell;
    if (std::sscanf(line.c_str(), "%zu,%zu,%lf,%lf,%d", &stage, &index, &x, &y,
                    &cell) != 5)
      throw ParseError("trajectory CSV: bad row '" + line + "'");
    const auto located = locate_cell(g, {x, y});
    if (!located || *located != cell)
      throw ParseError("trajectory CSV: waypoint cell mismatch at index " +
                       std::to_string(index));
    if (first || stage != last_stage) {
      traj.stage_boundaries.push_back(traj.waypoints.size());
      last_stage = stage;
      first = false;
    }
    traj.waypoints.push_back({{x, y}, cell});
  }
  if (traj.waypoints.empty()) throw ParseError("trajectory CSV: no waypoints");
  return traj;
}

}  // namespace ltlplan
