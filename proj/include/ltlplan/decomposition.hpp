#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ltlplan/map_model.hpp"

namespace ltlplan {

struct Cell {
  int id = -1;
  Rect rect;
  std::set<std::string> atoms;
  bool free = true;
};

/// Sweep-line grid over all region edge coordinates. Cell ids are dense,
/// row-major in (y, x) of the lower-left corner, and cover obstacle cells
/// too (with free=false); edges connect free cells only.
struct CellGraph {
  std::vector<Cell> cells;
  std::vector<std::pair<int, int>> edges;  // directed (from, to)

  // Grid structure backing O(log n) point location.
  std::vector<double> xs;  // sorted distinct x grid lines
  std::vector<double> ys;  // sorted distinct y grid lines
  int cols = 0;
  int rows = 0;

  std::vector<std::vector<int>> adjacency;  // per cell id, sorted; empty for obstacles

  int free_cell_count() const;
  bool adjacent(int a, int b) const;
};

CellGraph decompose(const MapSpec& map);

/// Unique free cell containing p under half-open membership; nullopt when p
/// is in an obstacle cell or outside the workspace.
std::optional<int> locate_cell(const CellGraph& g, const Point& p);

const std::vector<int>& neighbors(const CellGraph& g, int id);

/// Cell table as CSV: id,x_min,y_min,x_max,y_max,free,atoms
std::string cells_to_csv(const CellGraph& g);

}  // namespace ltlplan
