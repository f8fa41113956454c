#include "ltlplan/map_model.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ltlplan/errors.hpp"

namespace ltlplan {

using nlohmann::json;

std::string to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Start: return "start";
    case RegionKind::Goal: return "goal";
    case RegionKind::Obstacle: return "obstacle";
    case RegionKind::Avoid: return "avoid";
  }
  return "?";
}

RegionKind region_kind_from_string(const std::string& s) {
  if (s == "start") return RegionKind::Start;
  if (s == "goal") return RegionKind::Goal;
  if (s == "obstacle") return RegionKind::Obstacle;
  if (s == "avoid") return RegionKind::Avoid;
  throw ParseError("unknown region kind '" + s + "'");
}

const RegionSpec& MapSpec::start() const {
  for (const auto& r : regions) {
    if (r.kind == RegionKind::Start) return r;
  }
  throw ValidationError("map has no start region");
}

std::set<std::string> MapSpec::atoms() const {
  std::set<std::string> out;
  for (const auto& r : regions) {
    if (!r.atom.empty()) out.insert(r.atom);
  }
  return out;
}

namespace {

void reject_unknown_fields(const json& obj, std::initializer_list<const char*> known,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) {
      if (it.key() == k) { ok = true; break; }
    }
    if (!ok) throw ParseError("unknown field '" + it.key() + "' in " + where);
  }
}

Rect parse_rect(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be an object");
  reject_unknown_fields(obj, {"x_min", "y_min", "x_max", "y_max"}, where);
  Rect r;
  try {
    r.x_min = obj.at("x_min").get<double>();
    r.y_min = obj.at("y_min").get<double>();
    r.x_max = obj.at("x_max").get<double>();
    r.y_max = obj.at("y_max").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  for (double v : {r.x_min, r.y_min, r.x_max, r.y_max}) {
    if (!std::isfinite(v)) throw ParseError(where + ": non-finite coordinate");
  }
  return r;
}

bool valid_atom_name(const std::string& a) {
  if (a.empty() || !std::islower(static_cast<unsigned char>(a[0]))) return false;
  for (char c : a) {
    if (!std::islower(static_cast<unsigned char>(c)) &&
        !std::isdigit(static_cast<unsigned char>(c)))
      return false;
  }
  return true;
}

}  // namespace

void validate_map(const MapSpec& map) {
  if (map.workspace.x_min >= map.workspace.x_max ||
      map.workspace.y_min >= map.workspace.y_max)
    throw ValidationError("workspace rectangle has non-positive area");

  int starts = 0;
  std::set<std::string> seen_atoms;
  std::set<std::string> seen_names;
  std::vector<Rect> obstacle_rects;
  for (const auto& r : map.regions) {
    const std::string where = "region '" + r.name + "'";
    if (r.name.empty()) throw ValidationError("region with empty name");
    if (!seen_names.insert(r.name).second)
      throw ValidationError("duplicate region name '" + r.name + "'");
    if (r.rect.x_min >= r.rect.x_max || r.rect.y_min >= r.rect.y_max)
      throw ValidationError(where + ": rectangle has non-positive area");
    if (!map.workspace.contains_rect(r.rect))
      throw ValidationError(where + ": rectangle outside workspace");
    if (r.kind == RegionKind::Start) ++starts;
    if (r.kind == RegionKind::Goal || r.kind == RegionKind::Avoid) {
      if (r.atom.empty()) throw ValidationError(where + ": missing atom");
    }
    if (!r.atom.empty()) {
      if (!valid_atom_name(r.atom))
        throw ValidationError(where + ": bad atom name '" + r.atom + "'");
      if (!seen_atoms.insert(r.atom).second)
        throw ValidationError(where + ": duplicate atom '" + r.atom + "'");
    }
    if (r.kind == RegionKind::Obstacle) {
      for (const auto& other : obstacle_rects) {
        if (other == r.rect)
          throw ValidationError(where + ": duplicate obstacle rectangle");
      }
      obstacle_rects.push_back(r.rect);
    }
  }
  if (starts != 1)
    throw ValidationError("map must have exactly one start region, found " +
                          std::to_string(starts));

  // Overlap policy: goals stay clear of obstacles, avoid stays clear of start.
  for (const auto& a : map.regions) {
    for (const auto& b : map.regions) {
      if (a.kind == RegionKind::Goal && b.kind == RegionKind::Obstacle &&
          a.rect.overlaps(b.rect))
        throw ValidationError("goal region '" + a.name + "' overlaps obstacle '" +
                              b.name + "'");
      if (a.kind == RegionKind::Avoid && b.kind == RegionKind::Start &&
          a.rect.overlaps(b.rect))
        throw ValidationError("avoid region '" + a.name + "' overlaps start '" +
                              b.name + "'");
    }
  }
}

MapSpec load_map(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("map document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("map document must be a JSON object");
  reject_unknown_fields(doc, {"workspace", "regions"}, "map document");

  MapSpec map;
  if (!doc.contains("workspace")) throw ParseError("map document: missing workspace");
  map.workspace = parse_rect(doc["workspace"], "workspace");
  if (doc.contains("regions")) {
    if (!doc["regions"].is_array()) throw ParseError("regions must be an array");
    for (const auto& jr : doc["regions"]) {
      if (!jr.is_object()) throw ParseError("region entry must be an object");
      reject_unknown_fields(jr, {"name", "kind", "atom", "rect"}, "region entry");
      RegionSpec r;
      try {
        r.name = jr.at("name").get<std::string>();
        r.kind = region_kind_from_string(jr.at("kind").get<std::string>());
      } catch (const json::exception& e) {
        throw ParseError(std::string("region entry: ") + e.what());
      }
      if (jr.contains("atom")) r.atom = jr["atom"].get<std::string>();
      if (!jr.contains("rect")) throw ParseError("region '" + r.name + "': missing rect");
      r.rect = parse_rect(jr["rect"], "region '" + r.name + "'");
      map.regions.push_back(std::move(r));
    }
  }
  validate_map(map);
  return map;
}

MapSpec load_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open map file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_map(ss.str());
}

std::string save_map(const MapSpec& map) {
  auto rect_json = [](const Rect& r) {
    return json{{"x_min", r.x_min}, {"y_min", r.y_min},
                {"x_max", r.x_max}, {"y_max", r.y_max}};
  };
  json doc;
  doc["workspace"] = rect_json(map.workspace);
  doc["regions"] = json::array();
  for (const auto& r : map.regions) {
    json jr{{"name", r.name}, {"kind", to_string(r.kind)}, {"rect", rect_json(r.rect)}};
    if (!r.atom.empty()) jr["atom"] = r.atom;
    doc["regions"].push_back(std::move(jr));
  }
  return doc.dump(2);
}

}  // namespace ltlplan
