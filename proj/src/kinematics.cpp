#include "ltlplan/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ltlplan/errors.hpp"

namespace ltlplan {

double normalize_angle(double theta) {
  double t = std::fmod(theta + M_PI, 2.0 * M_PI);
  if (t < 0.0) t += 2.0 * M_PI;
  return t - M_PI;
}

RobotState step(const RobotState& s, double v_left, double v_right,
                const DiffDriveParams& p) {
  if (std::abs(v_left) > p.wheel_speed_max || std::abs(v_right) > p.wheel_speed_max)
    throw WheelSpeedExceeded("wheel speed exceeds limit " +
                             std::to_string(p.wheel_speed_max));
  const double v = (v_left + v_right) / 2.0;
  const double omega = (v_right - v_left) / p.wheelbase;
  RobotState out;
  out.x = s.x + v * std::cos(s.theta) * p.dt;
  out.y = s.y + v * std::sin(s.theta) * p.dt;
  out.theta = normalize_angle(s.theta + omega * p.dt);
  return out;
}

Errors compute_errors(const RobotState& s, const Point& target) {
  const double dx = target.x - s.x;
  const double dy = target.y - s.y;
  Errors e;
  e.e_distance = std::sqrt(dx * dx + dy * dy);
  e.theta_desired = (dx == 0.0 && dy == 0.0) ? 0.0 : std::atan2(dy, dx);
  e.e_heading = normalize_angle(e.theta_desired - s.theta);
  return e;
}

std::pair<double, PidState> pid_update(PidState c, double e_heading, double dt,
                                       const PidGains& gains) {
  c.integral = std::clamp(c.integral + e_heading * dt, -gains.integral_limit,
                          gains.integral_limit);
  const double derivative = c.first ? 0.0 : (e_heading - c.prev_error) / dt;
  c.prev_error = e_heading;
  c.first = false;
  const double omega =
      gains.kp * e_heading + gains.ki * c.integral + gains.kd * derivative;
  return {omega, c};
}

SimTrace track_trajectory(const Trajectory& traj, const DiffDriveParams& p,
                          const PidGains& gains, const CellGraph& g,
                          const Dfa* dfa, const TrackerConfig& tracker) {
  SimTrace trace;
  if (traj.waypoints.empty()) return trace;

  RobotState state;
  state.x = traj.waypoints.front().position.x;
  state.y = traj.waypoints.front().position.y;
  if (traj.waypoints.size() > 1) {
    const auto e = compute_errors(state, traj.waypoints[1].position);
    state.theta = e.theta_desired;
  }

  int monitor = -1;
  auto feed_monitor = [&](int cell) {
    if (!dfa) return true;
    const auto& atoms = g.cells[cell].atoms;
    monitor = dfa_step(*dfa, monitor, LabelSet(atoms.begin(), atoms.end()));
    return !(dfa->trap && *dfa->trap == monitor);
  };
  if (dfa) {
    monitor = dfa->initial;
    if (!feed_monitor(traj.waypoints.front().cell)) return trace;
  }

  // Stage-goal waypoints (one per stage boundary plus the last) must actually
  // be entered, not just approached: the goal cell can be narrower than the
  // capture radius, and the monitor only advances on cells the robot visits.
  std::vector<bool> must_enter(traj.waypoints.size(), false);
  if (!traj.waypoints.empty()) {
    must_enter.back() = true;
    for (std::size_t b : traj.stage_boundaries)
      if (b > 0 && b < traj.waypoints.size()) must_enter[b - 1] = true;
  }

  std::size_t target = traj.waypoints.size() > 1 ? 1 : 0;
  const int ticks_per_waypoint =
      std::max(1, static_cast<int>(tracker.waypoint_timeout / p.dt));
  int ticks_on_waypoint = 0;
  PidState pid;
  double t = 0.0;
  trace.waypoints_reached = 0;

  if (traj.waypoints.size() == 1) {
    trace.success = !dfa || dfa->accepting.count(monitor) > 0;
    trace.waypoints_reached = 1;
    return trace;
  }

  while (true) {
    const auto e = compute_errors(state, traj.waypoints[target].position);
    if (e.e_distance < tracker.waypoint_radius) {
      const bool final_wp = target + 1 == traj.waypoints.size();
      bool captured = true;
      if (must_enter[target]) {
        const auto here = locate_cell(g, {state.x, state.y});
        captured = here && *here == traj.waypoints[target].cell;
      }
      if (captured) {
        trace.waypoints_reached = static_cast<int>(target);
        if (final_wp) {
          trace.success = !dfa || dfa->accepting.count(monitor) > 0;
          trace.waypoints_reached = static_cast<int>(traj.waypoints.size());
          return trace;
        }
        ++target;
        ticks_on_waypoint = 0;
        continue;
      }
    }
    if (++ticks_on_waypoint > ticks_per_waypoint) return trace;  // timed out

    auto [omega, pid_next] = pid_update(pid, e.e_heading, p.dt, gains);
    pid = pid_next;
    const double v = std::abs(e.e_heading) < tracker.heading_gate ? p.v_max : 0.0;
    const double half = omega * p.wheelbase / 2.0;
    const double v_left =
        std::clamp(v - half, -p.wheel_speed_max, p.wheel_speed_max);
    const double v_right =
        std::clamp(v + half, -p.wheel_speed_max, p.wheel_speed_max);

    state = step(state, v_left, v_right, p);
    t += p.dt;
    trace.steps.push_back({t, state, e.e_distance, e.e_heading, v_left, v_right});

    const auto cell = locate_cell(g, {state.x, state.y});
    if (!cell) return trace;  // strayed into an obstacle or off the map
    if (!feed_monitor(*cell)) return trace;
  }
}

std::string sim_trace_to_csv(const SimTrace& trace) {
  std::ostringstream out;
  out << "t,x,y,theta,e_dist,e_head,v_left,v_right\n";
  char buf[192];
  for (const auto& s : trace.steps) {
    std::snprintf(buf, sizeof buf, "%.6f,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  s.t, s.state.x, s.state.y, s.state.theta, s.e_distance,
                  s.e_heading, s.v_left, s.v_right);
    out << buf;
  }
  out << "# success=" << (trace.success ? 1 : 0)
      << " waypoints_reached=" << trace.waypoints_reached << '\n';
  return out.str();
}

}  // namespace ltlplan
