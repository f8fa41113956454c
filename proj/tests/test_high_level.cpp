#include <doctest.h>

#include <algorithm>
#include <deque>
#include <map>

#include "ltlplan/errors.hpp"
#include "ltlplan/high_level.hpp"
#include "ltlplan/rng.hpp"

using namespace ltlplan;

namespace {

// 1x3 corridor with g1 on the rightmost cell.
MapSpec corridor_map() {
  MapSpec map;
  map.workspace = {0, 0, 3, 1};
  map.regions.push_back({"start", RegionKind::Start, {0, 0, 1, 1}, ""});
  map.regions.push_back({"goal1", RegionKind::Goal, {2, 0, 3, 1}, "g1"});
  return map;
}

MapSpec canonical() {
  return load_map_file(std::string(LTLPLAN_DATA_DIR) + "/maps/canonical.json");
}

MapSpec canonical_safety() {
  return load_map_file(std::string(LTLPLAN_DATA_DIR) +
                       "/maps/canonical_safety.json");
}

// Reference BFS over the fully materialized product graph; used as the
// optimality oracle for product_bfs's lazy expansion.
int reference_min_hops(const TransitionSystem& ts, const Dfa& d) {
  const ProductState start{ts.initial,
                           dfa_step(d, d.initial, ts.labeling.at(ts.initial))};
  if (d.trap && *d.trap == start.q) return -1;
  std::map<ProductState, int> dist{{start, 0}};
  std::deque<ProductState> queue{start};
  while (!queue.empty()) {
    const ProductState cur = queue.front();
    queue.pop_front();
    if (d.accepting.count(cur.q)) return dist[cur];
    std::vector<ProductState> next;
    for (int cell : ts.transitions.at(cur.cell))
      next.push_back({cell, dfa_step(d, cur.q, ts.labeling.at(cell))});
    if (const int q2 = dfa_step(d, cur.q, ts.labeling.at(cur.cell)); q2 != cur.q)
      next.push_back({cur.cell, q2});
    for (const auto& ps : next) {
      if ((d.trap && *d.trap == ps.q) || dist.count(ps)) continue;
      dist[ps] = dist[cur] + 1;
      queue.push_back(ps);
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("build_ts mirrors the free cells") {
  MapSpec tiny;
  tiny.workspace = {0, 0, 1, 1};
  tiny.regions.push_back({"start", RegionKind::Start, {0, 0, 1, 1}, ""});
  const CellGraph g1 = decompose(tiny);
  const TransitionSystem ts1 = build_ts(g1, tiny);
  CHECK(ts1.states.size() == 1);
  CHECK(ts1.transitions.at(ts1.initial).empty());

  MapSpec ring;
  ring.workspace = {0, 0, 3, 3};
  ring.regions.push_back({"start", RegionKind::Start, {0, 0, 1, 1}, ""});
  ring.regions.push_back({"wall", RegionKind::Obstacle, {1, 1, 2, 2}, ""});
  const CellGraph g2 = decompose(ring);
  const TransitionSystem ts2 = build_ts(g2, ring);
  CHECK(ts2.states.size() == 8);
  std::size_t transition_count = 0;
  for (const auto& [s, targets] : ts2.transitions) transition_count += targets.size();
  CHECK(transition_count == 16);

  const MapSpec canon = canonical();
  const CellGraph g3 = decompose(canon);
  CHECK(build_ts(g3, canon).states.size() == g3.free_cell_count());
}

TEST_CASE("start centroid inside an obstacle is rejected") {
  MapSpec map;
  map.workspace = {0, 0, 4, 1};
  map.regions.push_back({"start", RegionKind::Start, {0, 0, 2, 1}, ""});
  map.regions.push_back({"wall", RegionKind::Obstacle, {0.5, 0, 1.5, 1}, ""});
  const CellGraph g = decompose(map);
  CHECK_THROWS_AS(build_ts(g, map), StartInObstacle);
}

TEST_CASE("corridor product search: two hops to the goal") {
  const MapSpec map = corridor_map();
  const CellGraph g = decompose(map);
  const TransitionSystem ts = build_ts(g, map);
  const Dfa d = compile_dfa(parse_ltl("F(g1)"));
  const auto res = product_bfs(ts, d);
  REQUIRE(res.found);
  REQUIRE(res.path.size() == 3);
  CHECK(res.path.front().cell == ts.initial);
  CHECK(d.accepting.count(res.path.back().q) == 1);
  CHECK(reference_min_hops(ts, d) == 2);
}

TEST_CASE("unreachable goal atom yields no plan") {
  const MapSpec map = corridor_map();
  const CellGraph g = decompose(map);
  const TransitionSystem ts = build_ts(g, map);
  const auto res = product_bfs(ts, compile_dfa(parse_ltl("F(g9)")));
  CHECK(!res.found);
  CHECK(res.best_stage == 0);
}

TEST_CASE("walled-off goal yields no plan with progress diagnostics") {
  MapSpec map;
  map.workspace = {0, 0, 5, 1};
  map.regions.push_back({"start", RegionKind::Start, {0, 0, 1, 1}, ""});
  map.regions.push_back({"goal1", RegionKind::Goal, {1, 0, 2, 1}, "g1"});
  map.regions.push_back({"wall", RegionKind::Obstacle, {3, 0, 4, 1}, ""});
  map.regions.push_back({"goal2", RegionKind::Goal, {4, 0, 5, 1}, "g2"});
  const CellGraph g = decompose(map);
  const TransitionSystem ts = build_ts(g, map);
  const auto res = product_bfs(ts, compile_dfa(parse_ltl("F(g1 & F(g2))")));
  CHECK(!res.found);
  CHECK(res.best_stage == 1);  // reached g1 but never g2
}

TEST_CASE("disjunctive first stage resolves to the nearer goal") {
  const MapSpec map = canonical();
  const CellGraph g = decompose(map);
  const TransitionSystem ts = build_ts(g, map);
  const Dfa d = compile_dfa(parse_ltl("F(g1||g2 & F(g3 & F(g4)))"));
  const auto res = product_bfs(ts, d);
  REQUIRE(res.found);
  // Find the cell where the first DFA change fires: it must be g2-labeled.
  for (std::size_t i = 1; i < res.path.size(); ++i) {
    if (res.path[i].q != res.path[i - 1].q) {
      const auto& atoms = g.cells[res.path[i].cell].atoms;
      CHECK(atoms.count("g2") == 1);
      CHECK(atoms.count("g1") == 0);
      break;
    }
  }
}

TEST_CASE("stage extraction on the canonical four-goal task") {
  const MapSpec map = canonical();
  const CellGraph g = decompose(map);
  const TransitionSystem ts = build_ts(g, map);
  const Dfa d = compile_dfa(parse_ltl("F(g1 & F(g2 & F(g3 & F(g4))))"));
  const auto res = product_bfs(ts, d);
  REQUIRE(res.found);
  const HighLevelPlan plan = extract_stages(res.path, d, g);
  REQUIRE(plan.stages.size() == 4);

  for (std::size_t k = 0; k < plan.stages.size(); ++k) {
    const auto& s = plan.stages[k];
    CHECK(s.target_atoms == std::set<std::string>{"g" + std::to_string(k + 1)});
    // Consecutive cells in the path are equal or adjacent.
    for (std::size_t i = 1; i < s.cell_path.size(); ++i) {
      const bool ok = s.cell_path[i] == s.cell_path[i - 1] ||
                      g.adjacent(s.cell_path[i], s.cell_path[i - 1]);
      CHECK(ok);
    }
    // The path lies inside the allowed corridor.
    for (int c : s.cell_path) CHECK(s.allowed.count(c) == 1);
    // Handoff: stages share their junction cell.
    if (k > 0) CHECK(s.cell_path.front() == plan.stages[k - 1].cell_path.back());
    // The stage's closing cell carries its target atom.
    CHECK(g.cells[s.cell_path.back()].atoms.count(*s.target_atoms.begin()) == 1);
  }

  // Replaying the full cell path through the DFA ends accepting.
  int q = d.initial;
  q = dfa_step(d, q, ts.labeling.at(res.path.front().cell));
  for (std::size_t i = 1; i < res.path.size(); ++i)
    q = dfa_step(d, q, ts.labeling.at(res.path[i].cell));
  CHECK(d.accepting.count(q) == 1);
}

TEST_CASE("single-stage plan when the start already satisfies the goal") {
  MapSpec map;
  map.workspace = {0, 0, 1, 1};
  map.regions.push_back({"start", RegionKind::Start, {0, 0, 1, 1}, ""});
  map.regions.push_back({"goal1", RegionKind::Goal, {0, 0, 1, 1}, "g1"});
  const CellGraph g = decompose(map);
  const TransitionSystem ts = build_ts(g, map);
  const Dfa d = compile_dfa(parse_ltl("F(g1)"));
  const auto res = product_bfs(ts, d);
  REQUIRE(res.found);
  const HighLevelPlan plan = extract_stages(res.path, d, g);
  REQUIRE(plan.stages.size() == 1);
  CHECK(plan.stages[0].cell_path.size() == 1);
  CHECK(plan.stages[0].target_atoms == std::set<std::string>{"g1"});
}

TEST_CASE("safety corridor excludes forbidden cells after the trigger") {
  const MapSpec map = canonical_safety();
  const CellGraph g = decompose(map);
  const TransitionSystem ts = build_ts(g, map);
  const Dfa d = compile_dfa(
      parse_ltl("F(g1 & F(g2 & F(g3 & F(g4)))) & G(g1 -> X G(!us))"));
  const auto res = product_bfs(ts, d);
  REQUIRE(res.found);
  const HighLevelPlan plan = extract_stages(res.path, d, g);
  REQUIRE(plan.stages.size() == 4);
  for (std::size_t k = 1; k < plan.stages.size(); ++k) {
    for (int c : plan.stages[k].allowed) CHECK(g.cells[c].atoms.count("us") == 0);
  }
  // Stage 1 runs before the trigger fires; the us-cells exist in the map.
  bool any_us = false;
  for (const auto& c : g.cells) any_us |= c.atoms.count("us") > 0;
  CHECK(any_us);
}

TEST_CASE("search depth matches the exhaustive product oracle") {
  Rng rng(909090);
  const std::vector<std::string> formulas = {
      "F(a)", "F(a & F(b))", "F(a||b & F(c))", "F(a & F(b & F(c)))",
      "F(a & F(b)) & G(a -> X G(!c))"};
  int checked = 0;
  for (int trial = 0; trial < 120 && checked < 25; ++trial) {
    MapSpec map;
    map.workspace = {0, 0, 4, 4};
    map.regions.push_back({"start", RegionKind::Start, {0, 0, 1, 1}, ""});
    const char* names[] = {"a", "b", "c"};
    for (int i = 0; i < 3; ++i) {
      const double x = rng.index(3) + 1.0;
      const double y = rng.index(3) + 1.0;
      map.regions.push_back({std::string("r") + names[i], RegionKind::Goal,
                             {x, y, x + 1, y + 1}, names[i]});
    }
    if (rng.uniform() < 0.5) {
      const double x = 0.5 + rng.uniform() * 2.0;
      map.regions.push_back(
          {"wall", RegionKind::Obstacle, {x, 1.5, x + 1.0, 2.5}, ""});
    }
    CellGraph g;
    try {
      g = decompose(map);
    } catch (const ValidationError&) {
      continue;  // overlapping random rects
    }
    if (g.free_cell_count() > 20) continue;
    TransitionSystem ts;
    try {
      ts = build_ts(g, map);
    } catch (const StartInObstacle&) {
      continue;
    }
    for (const auto& text : formulas) {
      const Dfa d = compile_dfa(parse_ltl(text));
      const auto res = product_bfs(ts, d);
      const int oracle = reference_min_hops(ts, d);
      if (!res.found) {
        CHECK(oracle == -1);
      } else {
        REQUIRE(oracle >= 0);
        CHECK(static_cast<int>(res.path.size()) - 1 == oracle);
      }
    }
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("plan JSON lists every stage") {
  const MapSpec map = corridor_map();
  const CellGraph g = decompose(map);
  const TransitionSystem ts = build_ts(g, map);
  const Dfa d = compile_dfa(parse_ltl("F(g1)"));
  const auto res = product_bfs(ts, d);
  const HighLevelPlan plan = extract_stages(res.path, d, g);
  const std::string doc = plan_to_json(plan);
  CHECK(doc.find("\"cell_path\"") != std::string::npos);
  CHECK(doc.find("\"target_atoms\"") != std::string::npos);
  CHECK(doc.find("g1") != std::string::npos);
}
