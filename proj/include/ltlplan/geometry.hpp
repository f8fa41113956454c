#pragma once

#include <cmath>

namespace ltlplan {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Axis-aligned rectangle, x_min < x_max and y_min < y_max.
struct Rect {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  Point centroid() const { return {(x_min + x_max) / 2.0, (y_min + y_max) / 2.0}; }

  bool contains_rect(const Rect& other) const {
    return other.x_min >= x_min && other.x_max <= x_max &&
           other.y_min >= y_min && other.y_max <= y_max;
  }

  /// Positive-area intersection test.
  bool overlaps(const Rect& other) const {
    return x_min < other.x_max && other.x_min < x_max &&
           y_min < other.y_max && other.y_min < y_max;
  }

  bool operator==(const Rect& other) const = default;
};

/// Half-open membership: a boundary point belongs to exactly one grid cell.
inline bool point_in_rect(const Point& p, const Rect& r) {
  return p.x >= r.x_min && p.x < r.x_max && p.y >= r.y_min && p.y < r.y_max;
}

}  // namespace ltlplan
