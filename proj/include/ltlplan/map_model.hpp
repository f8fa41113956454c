#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ltlplan/geometry.hpp"

namespace ltlplan {

enum class RegionKind { Start, Goal, Obstacle, Avoid };

std::string to_string(RegionKind k);
RegionKind region_kind_from_string(const std::string& s);

struct RegionSpec {
  std::string name;
  RegionKind kind = RegionKind::Obstacle;
  Rect rect;
  std::string atom;  // empty when the region carries no proposition
};

struct MapSpec {
  Rect workspace;
  std::vector<RegionSpec> regions;

  const RegionSpec& start() const;
  std::set<std::string> atoms() const;
};

/// Parses and validates a JSON map document. Unknown fields are rejected.
MapSpec load_map(const std::string& text);
MapSpec load_map_file(const std::string& path);

/// Serializes back to the map document format (load_map round-trips).
std::string save_map(const MapSpec& map);

/// Enforces the MapSpec invariants; throws ValidationError.
void validate_map(const MapSpec& map);

}  // namespace ltlplan
