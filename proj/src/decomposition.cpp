#include "ltlplan/decomposition.hpp"

#include <algorithm>
#include <sstream>

#include "ltlplan/errors.hpp"

namespace ltlplan {

namespace {

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

int CellGraph::free_cell_count() const {
  int n = 0;
  for (const auto& c : cells)
    if (c.free) ++n;
  return n;
}

bool CellGraph::adjacent(int a, int b) const {
  if (a < 0 || b < 0 || a >= static_cast<int>(cells.size()) ||
      b >= static_cast<int>(cells.size()))
    return false;
  const auto& n = adjacency[a];
  return std::binary_search(n.begin(), n.end(), b);
}

CellGraph decompose(const MapSpec& map) {
  CellGraph g;
  std::vector<double> xs{map.workspace.x_min, map.workspace.x_max};
  std::vector<double> ys{map.workspace.y_min, map.workspace.y_max};
  for (const auto& r : map.regions) {
    xs.push_back(r.rect.x_min);
    xs.push_back(r.rect.x_max);
    ys.push_back(r.rect.y_min);
    ys.push_back(r.rect.y_max);
  }
  g.xs = sorted_unique(std::move(xs));
  g.ys = sorted_unique(std::move(ys));
  g.cols = static_cast<int>(g.xs.size()) - 1;
  g.rows = static_cast<int>(g.ys.size()) - 1;

  g.cells.reserve(static_cast<std::size_t>(g.cols) * g.rows);
  for (int row = 0; row < g.rows; ++row) {
    for (int col = 0; col < g.cols; ++col) {
      Cell c;
      c.id = row * g.cols + col;
      c.rect = {g.xs[col], g.ys[row], g.xs[col + 1], g.ys[row + 1]};
      const Point mid = c.rect.centroid();
      for (const auto& r : map.regions) {
        // Sweep-line construction makes every cell uniform per region, so
        // centroid membership decides containment.
        if (!point_in_rect(mid, r.rect)) continue;
        if (r.kind == RegionKind::Obstacle) c.free = false;
        if (!r.atom.empty()) c.atoms.insert(r.atom);
      }
      if (!c.free) c.atoms.clear();
      g.cells.push_back(std::move(c));
    }
  }

  if (g.free_cell_count() < 1)
    throw DegenerateGrid("workspace fully covered by obstacles");

  g.adjacency.assign(g.cells.size(), {});
  auto try_edge = [&g](int a, int b) {
    if (g.cells[a].free && g.cells[b].free) {
      g.adjacency[a].push_back(b);
      g.adjacency[b].push_back(a);
    }
  };
  for (int row = 0; row < g.rows; ++row) {
    for (int col = 0; col < g.cols; ++col) {
      const int id = row * g.cols + col;
      if (col + 1 < g.cols) try_edge(id, id + 1);
      if (row + 1 < g.rows) try_edge(id, id + g.cols);
    }
  }
  for (auto& n : g.adjacency) std::sort(n.begin(), n.end());
  for (std::size_t id = 0; id < g.adjacency.size(); ++id) {
    for (int to : g.adjacency[id]) g.edges.emplace_back(static_cast<int>(id), to);
  }
  return g;
}

std::optional<int> locate_cell(const CellGraph& g, const Point& p) {
  if (!point_in_rect(p, {g.xs.front(), g.ys.front(), g.xs.back(), g.ys.back()}))
    return std::nullopt;
  const auto col_it = std::upper_bound(g.xs.begin(), g.xs.end(), p.x);
  const auto row_it = std::upper_bound(g.ys.begin(), g.ys.end(), p.y);
  const int col = static_cast<int>(col_it - g.xs.begin()) - 1;
  const int row = static_cast<int>(row_it - g.ys.begin()) - 1;
  const int id = row * g.cols + col;
  if (!g.cells[id].free) return std::nullopt;
  return id;
}

const std::vector<int>& neighbors(const CellGraph& g, int id) {
  if (id < 0 || id >= static_cast<int>(g.cells.size())) throw UnknownCell(id);
  return g.adjacency[id];
}

std::string cells_to_csv(const CellGraph& g) {
  std::ostringstream out;
  out << "id,x_min,y_min,x_max,y_max,free,atoms\n";
  for (const auto& c : g.cells) {
    out << c.id << ',' << c.rect.x_min << ',' << c.rect.y_min << ','
        << c.rect.x_max << ',' << c.rect.y_max << ',' << (c.free ? 1 : 0) << ',';
    bool first = true;
    for (const auto& a : c.atoms) {
      if (!first) out << ';';
      out << a;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace ltlplan
