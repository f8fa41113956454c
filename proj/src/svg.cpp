#include "ltlplan/svg.hpp"

#include <sstream>

namespace ltlplan {

namespace {

constexpr double kScale = 60.0;  // workspace units to pixels

class SvgWriter {
 public:
  explicit SvgWriter(const Rect& workspace) : ws_(workspace) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
         << ws_.width() * kScale << "\" height=\"" << ws_.height() * kScale
         << "\" viewBox=\"0 0 " << ws_.width() * kScale << ' '
         << ws_.height() * kScale << "\">\n";
    out_ << "<rect x=\"0\" y=\"0\" width=\"" << ws_.width() * kScale
         << "\" height=\"" << ws_.height() * kScale
         << "\" fill=\"white\" stroke=\"black\"/>\n";
  }

  double px(double x) const { return (x - ws_.x_min) * kScale; }
  double py(double y) const { return (ws_.y_max - y) * kScale; }  // y up

  void rect(const Rect& r, const std::string& fill, double opacity,
            const std::string& stroke) {
    out_ << "<rect x=\"" << px(r.x_min) << "\" y=\"" << py(r.y_max)
         << "\" width=\"" << r.width() * kScale << "\" height=\""
         << r.height() * kScale << "\" fill=\"" << fill << "\" fill-opacity=\""
         << opacity << "\" stroke=\"" << stroke << "\" stroke-width=\"0.5\"/>\n";
  }

  void line(const Point& a, const Point& b, const std::string& stroke,
            double width, double opacity) {
    out_ << "<line x1=\"" << px(a.x) << "\" y1=\"" << py(a.y) << "\" x2=\""
         << px(b.x) << "\" y2=\"" << py(b.y) << "\" stroke=\"" << stroke
         << "\" stroke-width=\"" << width << "\" stroke-opacity=\"" << opacity
         << "\"/>\n";
  }

  void text(const Point& at, const std::string& s) {
    out_ << "<text x=\"" << px(at.x) << "\" y=\"" << py(at.y)
         << "\" font-size=\"12\" text-anchor=\"middle\">" << s << "</text>\n";
  }

  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  Rect ws_;
  std::ostringstream out_;
};

void draw_base(SvgWriter& w, const CellGraph& g, const MapSpec& map) {
  for (const auto& c : g.cells)
    w.rect(c.rect, c.free ? "none" : "black", c.free ? 0.0 : 1.0, "#bbbbbb");
  for (const auto& r : map.regions) {
    switch (r.kind) {
      case RegionKind::Start: w.rect(r.rect, "red", 0.6, "red"); break;
      case RegionKind::Goal: w.rect(r.rect, "blue", 0.5, "blue"); break;
      case RegionKind::Avoid: w.rect(r.rect, "red", 0.25, "red"); break;
      case RegionKind::Obstacle: w.rect(r.rect, "black", 1.0, "black"); break;
    }
    if (!r.atom.empty()) w.text(r.rect.centroid(), r.atom);
  }
}

const char* stage_color(std::size_t k) {
  static const char* colors[] = {"#1f4e9c", "#7fb2e5", "#d95f02",
                                 "#fdbf6f", "#33a02c", "#b2df8a"};
  return colors[k % (sizeof colors / sizeof colors[0])];
}

void draw_corridors(SvgWriter& w, const CellGraph& g, const HighLevelPlan& plan) {
  for (std::size_t k = 0; k < plan.stages.size(); ++k) {
    for (int id : plan.stages[k].allowed)
      w.rect(g.cells[id].rect, stage_color(k), 0.3, "none");
  }
}

}  // namespace

std::string svg_decomposition(const CellGraph& g, const MapSpec& map) {
  SvgWriter w(map.workspace);
  draw_base(w, g, map);
  for (const auto& c : g.cells) {
    if (c.free) w.text(c.rect.centroid(), std::to_string(c.id));
  }
  return w.finish();
}

std::string svg_plan(const CellGraph& g, const MapSpec& map,
                     const HighLevelPlan& plan) {
  SvgWriter w(map.workspace);
  draw_base(w, g, map);
  draw_corridors(w, g, plan);
  return w.finish();
}

std::string svg_trajectory(const CellGraph& g, const MapSpec& map,
                           const Trajectory& traj, const PlannerDebug* debug,
                           const HighLevelPlan* plan) {
  SvgWriter w(map.workspace);
  draw_base(w, g, map);
  if (plan) draw_corridors(w, g, *plan);
  if (debug) {
    for (const auto& [a, b] : debug->edges) w.line(a, b, "#888888", 0.6, 0.5);
  }
  for (std::size_t i = 1; i < traj.waypoints.size(); ++i)
    w.line(traj.waypoints[i - 1].position, traj.waypoints[i].position, "#c2185b",
           2.5, 1.0);
  return w.finish();
}

}  // namespace ltlplan
