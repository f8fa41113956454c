#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltlplan/decomposition.hpp"
#include "ltlplan/ltl.hpp"
#include "ltlplan/low_level.hpp"

namespace ltlplan {

struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // normalized to [-pi, pi)
};

struct DiffDriveParams {
  double wheelbase = 0.5;
  double v_max = 1.0;
  double wheel_speed_max = 2.0;
  double dt = 0.02;
};

struct PidGains {
  double kp = 3.0;
  double ki = 0.0;
  double kd = 0.1;
  double integral_limit = 1.0;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool first = true;
};

struct TrackerConfig {
  double waypoint_radius = 0.5;    // advance when this close to the waypoint
  double waypoint_timeout = 20.0;  // seconds allowed per waypoint
  double heading_gate = 0.7853981633974483;  // pi/4: rotate in place beyond it
};

struct SimStep {
  double t = 0.0;
  RobotState state;
  double e_distance = 0.0;
  double e_heading = 0.0;
  double v_left = 0.0;
  double v_right = 0.0;
};

struct SimTrace {
  std::vector<SimStep> steps;
  bool success = false;
  int waypoints_reached = 0;
};

double normalize_angle(double theta);

/// Euler step of the differential-drive model; uses the current heading for
/// the position update, then normalizes the new heading.
RobotState step(const RobotState& s, double v_left, double v_right,
                const DiffDriveParams& p);

struct Errors {
  double e_distance;
  double theta_desired;
  double e_heading;
};

Errors compute_errors(const RobotState& s, const Point& target);

std::pair<double, PidState> pid_update(PidState c, double e_heading, double dt,
                                       const PidGains& gains);

/// Tracks the trajectory waypoint by waypoint with PID heading control.
/// When a DFA is supplied, every tick's cell label feeds a runtime monitor;
/// entering the trap state (or leaving free space) fails the run.
SimTrace track_trajectory(const Trajectory& traj, const DiffDriveParams& p,
                          const PidGains& gains, const CellGraph& g,
                          const Dfa* dfa = nullptr,
                          const TrackerConfig& tracker = {});

std::string sim_trace_to_csv(const SimTrace& trace);

}  // namespace ltlplan
