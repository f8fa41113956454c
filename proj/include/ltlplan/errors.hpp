#pragma once

#include <stdexcept>
#include <string>

namespace ltlplan {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateGrid : std::runtime_error {
  explicit DegenerateGrid(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnknownCell : std::runtime_error {
  explicit UnknownCell(int id)
      : std::runtime_error("unknown cell id " + std::to_string(id)) {}
};

struct StartInObstacle : std::runtime_error {
  StartInObstacle() : std::runtime_error("start region centroid is not in a free cell") {}
};

struct UnsupportedFragment : std::runtime_error {
  explicit UnsupportedFragment(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyAllowedSet : std::runtime_error {
  EmptyAllowedSet() : std::runtime_error("allowed cell set is empty") {}
};

// High-level search exhausted: no accepting product state is reachable.
struct NoPlan : std::runtime_error {
  int best_stage;
  explicit NoPlan(const std::string& msg, int deepest_stage = 0)
      : std::runtime_error(msg), best_stage(deepest_stage) {}
};

// Low-level planner gave up; stage < 0 means a standalone planner call.
struct PlanFailure : std::runtime_error {
  int stage;
  explicit PlanFailure(const std::string& msg, int stage_index = -1)
      : std::runtime_error(msg), stage(stage_index) {}
};

struct UnsupportedTask : std::runtime_error {
  explicit UnsupportedTask(const std::string& msg) : std::runtime_error(msg) {}
};

struct WheelSpeedExceeded : std::runtime_error {
  explicit WheelSpeedExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoGoalsRecognized : std::runtime_error {
  explicit NoGoalsRecognized(const std::string& msg) : std::runtime_error(msg) {}
};

struct AmbiguousOrder : std::runtime_error {
  explicit AmbiguousOrder(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ltlplan
