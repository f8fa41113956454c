#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ltlplan/decomposition.hpp"
#include "ltlplan/ltl.hpp"

namespace ltlplan {

struct TransitionSystem {
  std::vector<int> states;                      // free cell ids, sorted
  std::map<int, std::vector<int>> transitions;  // per state, sorted targets
  std::map<int, LabelSet> labeling;
  int initial = -1;
};

struct ProductState {
  int cell = -1;
  int q = -1;
  auto operator<=>(const ProductState&) const = default;
};

struct ProductSearchResult {
  bool found = false;
  std::vector<ProductState> path;  // start to accepting, when found
  int best_stage = 0;              // deepest DFA stage reached, for diagnostics
};

struct PlanStage {
  int dfa_from = -1;
  int dfa_to = -1;
  std::vector<int> cell_path;
  std::set<int> allowed;
  std::set<std::string> target_atoms;
};

struct HighLevelPlan {
  std::vector<PlanStage> stages;
};

TransitionSystem build_ts(const CellGraph& g, const MapSpec& map);

/// Minimum-hop BFS over the product of the transition system and the DFA,
/// deterministic via (cell id, DFA index) expansion order. The initial
/// cell's label is consumed once at the start.
ProductSearchResult product_bfs(const TransitionSystem& ts, const Dfa& d);

/// Cuts a product path at DFA-state changes into stages and builds each
/// stage's allowed sampling corridor: the stage cell path, every cell
/// carrying the stage's target atoms (and the previous stage's, so goal
/// handoff cells are covered), widened by `inflation` rings of free
/// neighbors. Stages with the safety trigger already fired exclude cells
/// labeled with the forbidden atom.
HighLevelPlan extract_stages(const std::vector<ProductState>& path, const Dfa& d,
                             const CellGraph& g, int inflation = 1);

std::string plan_to_json(const HighLevelPlan& plan);

}  // namespace ltlplan
