#include "ltlplan/high_level.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <json.hpp>

#include "ltlplan/errors.hpp"

namespace ltlplan {

TransitionSystem build_ts(const CellGraph& g, const MapSpec& map) {
  TransitionSystem ts;
  for (const auto& c : g.cells) {
    if (!c.free) continue;
    ts.states.push_back(c.id);
    ts.transitions[c.id] = g.adjacency[c.id];
    ts.labeling[c.id] = LabelSet(c.atoms.begin(), c.atoms.end());
  }
  const Point start = map.start().rect.centroid();
  const auto cell = locate_cell(g, start);
  if (!cell) throw StartInObstacle();
  ts.initial = *cell;
  return ts;
}

ProductSearchResult product_bfs(const TransitionSystem& ts, const Dfa& d) {
  ProductSearchResult result;
  auto label_of = [&ts](int cell) -> const LabelSet& {
    return ts.labeling.at(cell);
  };
  auto is_trap = [&d](int q) { return d.trap && *d.trap == q; };

  const ProductState start{ts.initial, dfa_step(d, d.initial, label_of(ts.initial))};
  if (is_trap(start.q)) return result;

  std::map<ProductState, ProductState> parent;
  std::deque<ProductState> queue{start};
  parent[start] = start;
  std::optional<ProductState> goal;
  if (d.accepting.count(start.q)) goal = start;
  result.best_stage = std::max(0, d.stage_index[start.q]);

  while (!queue.empty() && !goal) {
    const ProductState cur = queue.front();
    queue.pop_front();

    std::vector<ProductState> next;
    for (int cell : ts.transitions.at(cur.cell))
      next.push_back({cell, dfa_step(d, cur.q, label_of(cell))});
    if (const int q2 = dfa_step(d, cur.q, label_of(cur.cell)); q2 != cur.q)
      next.push_back({cur.cell, q2});
    std::sort(next.begin(), next.end());

    for (const ProductState& ps : next) {
      if (is_trap(ps.q) || parent.count(ps)) continue;
      parent[ps] = cur;
      result.best_stage = std::max(result.best_stage, d.stage_index[ps.q]);
      if (d.accepting.count(ps.q)) {
        goal = ps;
        break;
      }
      queue.push_back(ps);
    }
  }

  if (!goal) return result;
  std::vector<ProductState> path;
  for (ProductState ps = *goal;; ps = parent.at(ps)) {
    path.push_back(ps);
    if (ps == start) break;
  }
  std::reverse(path.begin(), path.end());
  result.found = true;
  result.path = std::move(path);
  return result;
}

namespace {

std::set<std::string> crossed_atoms(const Dfa& d, int q_from, int q_to) {
  std::set<std::string> out;
  const int a = d.stage_index[q_from];
  const int b = d.stage_index[q_to];
  for (int k = a; k < b; ++k)
    out.insert(d.stage_guards[k].begin(), d.stage_guards[k].end());
  return out;
}

void inflate(std::set<int>& cells, const CellGraph& g, int rings) {
  for (int r = 0; r < rings; ++r) {
    std::set<int> grown = cells;
    for (int id : cells)
      for (int n : g.adjacency[id]) grown.insert(n);
    cells = std::move(grown);
  }
}

}  // namespace

HighLevelPlan extract_stages(const std::vector<ProductState>& path, const Dfa& d,
                             const CellGraph& g, int inflation) {
  HighLevelPlan plan;
  if (path.empty()) return plan;

  // Split at DFA-state changes; the cell where a change fires closes its
  // stage and opens the next one.
  std::vector<PlanStage> raw;
  if (path.size() == 1 || path.front().q == path.back().q) {
    PlanStage s;
    s.dfa_from = d.initial;
    s.dfa_to = path.front().q;
    for (const auto& ps : path) s.cell_path.push_back(ps.cell);
    s.target_atoms = crossed_atoms(d, s.dfa_from, s.dfa_to);
    raw.push_back(std::move(s));
  } else {
    PlanStage cur;
    cur.dfa_from = path.front().q;
    cur.cell_path.push_back(path.front().cell);
    for (std::size_t i = 1; i < path.size(); ++i) {
      cur.cell_path.push_back(path[i].cell);
      if (path[i].q != path[i - 1].q) {
        cur.dfa_to = path[i].q;
        cur.target_atoms = crossed_atoms(d, cur.dfa_from, cur.dfa_to);
        raw.push_back(cur);
        cur = PlanStage{};
        cur.dfa_from = path[i].q;
        cur.cell_path.push_back(path[i].cell);
      }
    }
    // Trailing run in the accepting state belongs to the last stage.
    if (cur.cell_path.size() > 1) {
      auto& last = raw.back();
      last.cell_path.insert(last.cell_path.end(), cur.cell_path.begin() + 1,
                            cur.cell_path.end());
    }
  }

  // A q-change that crosses no task stage (safety trigger firing on its own)
  // has no target atom; fold it into the following stage.
  std::vector<PlanStage> stages;
  for (auto& s : raw) {
    if (!stages.empty() && stages.back().target_atoms.empty()) {
      auto& prev = stages.back();
      prev.dfa_to = s.dfa_to;
      prev.cell_path.insert(prev.cell_path.end(), s.cell_path.begin() + 1,
                            s.cell_path.end());
      prev.target_atoms = s.target_atoms;
    } else {
      stages.push_back(std::move(s));
    }
  }

  for (std::size_t k = 0; k < stages.size(); ++k) {
    auto& s = stages[k];
    s.allowed.insert(s.cell_path.begin(), s.cell_path.end());
    auto add_atom_cells = [&](const std::set<std::string>& atoms) {
      for (const auto& c : g.cells) {
        if (!c.free) continue;
        for (const auto& a : atoms) {
          if (c.atoms.count(a)) {
            s.allowed.insert(c.id);
            break;
          }
        }
      }
    };
    add_atom_cells(s.target_atoms);
    if (k > 0) add_atom_cells(stages[k - 1].target_atoms);
    inflate(s.allowed, g, inflation);
    if (d.safety && d.safety_active[s.dfa_from]) {
      const std::string& forb = d.safety->second;
      for (auto it = s.allowed.begin(); it != s.allowed.end();) {
        if (g.cells[*it].atoms.count(forb))
          it = s.allowed.erase(it);
        else
          ++it;
      }
    }
  }
  plan.stages = std::move(stages);
  return plan;
}

std::string plan_to_json(const HighLevelPlan& plan) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& s : plan.stages) {
    doc.push_back({{"dfa_from", s.dfa_from},
                   {"dfa_to", s.dfa_to},
                   {"cell_path", s.cell_path},
                   {"allowed", std::vector<int>(s.allowed.begin(), s.allowed.end())},
                   {"target_atoms", std::vector<std::string>(s.target_atoms.begin(),
                                                            s.target_atoms.end())}});
  }
  return doc.dump(2);
}

}  // namespace ltlplan
