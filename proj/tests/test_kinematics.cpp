#include <doctest.h>

#include <cmath>

#include "ltlplan/errors.hpp"
#include "ltlplan/kinematics.hpp"
#include "ltlplan/rng.hpp"

using namespace ltlplan;

namespace {

constexpr double kPi = 3.14159265358979323846;

DiffDriveParams params(double dt) {
  DiffDriveParams p;
  p.dt = dt;
  return p;
}

}  // namespace

TEST_CASE("step: straight line, rotation, normalization") {
  const DiffDriveParams p = params(0.1);

  const RobotState straight = step({0, 0, 0}, 1.0, 1.0, p);
  CHECK(straight.x == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(straight.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(straight.theta == doctest::Approx(0.0).epsilon(1e-12));

  // Pure rotation: omega = (1 - (-1)) / 0.5 = 4.
  const RobotState spin = step({0, 0, 0}, -1.0, 1.0, p);
  CHECK(spin.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(spin.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(spin.theta == doctest::Approx(0.4).epsilon(1e-12));

  RobotState s{0, 0, 3.0};
  for (int i = 0; i < 50; ++i) {
    s = step(s, -1.0, 1.0, p);
    CHECK(s.theta >= -kPi);
    CHECK(s.theta < kPi);
  }

  CHECK_THROWS_AS(step({0, 0, 0}, 5.0, 0.0, p), WheelSpeedExceeded);
}

TEST_CASE("normalize_angle maps into [-pi, pi)") {
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(normalize_angle(kPi) == doctest::Approx(-kPi));
  CHECK(normalize_angle(-kPi) == doctest::Approx(-kPi));
  CHECK(normalize_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(normalize_angle(-7 * kPi) == doctest::Approx(-kPi));
  Rng rng(55);
  for (int i = 0; i < 1000; ++i) {
    const double t = normalize_angle((rng.uniform() - 0.5) * 100.0);
    CHECK(t >= -kPi);
    CHECK(t < kPi);
  }
}

TEST_CASE("compute_errors") {
  const auto ahead = compute_errors({0, 0, 0}, {1, 0});
  CHECK(ahead.e_distance == doctest::Approx(1.0));
  CHECK(ahead.theta_desired == doctest::Approx(0.0));
  CHECK(ahead.e_heading == doctest::Approx(0.0));

  const auto side = compute_errors({0, 0, kPi / 2}, {1, 0});
  CHECK(side.e_heading == doctest::Approx(-kPi / 2));

  // Wrapped difference: desired -3.0 against heading 3.0 gives 2*pi - 6.
  const auto wrap =
      compute_errors({0, 0, 3.0}, {std::cos(-3.0), std::sin(-3.0)});
  CHECK(wrap.theta_desired == doctest::Approx(-3.0));
  CHECK(wrap.e_heading == doctest::Approx(2 * kPi - 6.0));
  CHECK(wrap.e_heading == doctest::Approx(0.2832).epsilon(1e-3));

  const auto degenerate = compute_errors({2, 3, 1.0}, {2, 3});
  CHECK(degenerate.e_distance == 0.0);
  CHECK(degenerate.theta_desired == 0.0);
}

TEST_CASE("pid_update") {
  PidGains kp_only{1.0, 0.0, 0.0, 1.0};
  PidState c;
  auto [w1, c1] = pid_update(c, 0.5, 0.1, kp_only);
  CHECK(w1 == doctest::Approx(0.5));

  PidGains ki_only{0.0, 1.0, 0.0, 10.0};
  PidState ci;
  double w = 0.0;
  for (int i = 0; i < 3; ++i) std::tie(w, ci) = pid_update(ci, 1.0, 0.1, ki_only);
  CHECK(w == doctest::Approx(0.3));

  PidGains kd_only{0.0, 0.0, 1.0, 1.0};
  PidState cd;
  std::tie(w, cd) = pid_update(cd, 0.0, 0.1, kd_only);
  CHECK(w == doctest::Approx(0.0));  // derivative suppressed on first call
  std::tie(w, cd) = pid_update(cd, 0.2, 0.1, kd_only);
  CHECK(w == doctest::Approx(2.0));

  SUBCASE("anti-windup clamps the integral") {
    PidGains g{0.0, 1.0, 0.0, 0.25};
    PidState s;
    double out = 0.0;
    for (int i = 0; i < 100; ++i) std::tie(out, s) = pid_update(s, 1.0, 0.1, g);
    CHECK(out == doctest::Approx(0.25));
  }
}

TEST_CASE("randomized kinematic identities") {
  Rng rng(777);
  const DiffDriveParams p = params(0.02);
  for (int i = 0; i < 1000; ++i) {
    const double theta0 = (rng.uniform() - 0.5) * 2 * kPi * 0.999;
    const double c = (rng.uniform() - 0.5) * 2 * p.wheel_speed_max;
    RobotState s{rng.uniform() * 10, rng.uniform() * 10, theta0};
    const RobotState s0 = s;

    // Straight line: equal wheel speeds move along the initial heading.
    const int n = 1 + static_cast<int>(rng.index(10));
    for (int k = 0; k < n; ++k) s = step(s, c, c, p);
    CHECK(s.x ==
          doctest::Approx(s0.x + n * c * p.dt * std::cos(theta0)).epsilon(1e-9));
    CHECK(s.y ==
          doctest::Approx(s0.y + n * c * p.dt * std::sin(theta0)).epsilon(1e-9));

    // Pure rotation: position unchanged.
    RobotState r = s0;
    r = step(r, -c, c, p);
    CHECK(r.x == s0.x);
    CHECK(r.y == s0.y);

    // PID linearity with Ki = Kd = 0.
    const double e = (rng.uniform() - 0.5) * 2 * kPi;
    const double kp = rng.uniform() * 5.0;
    PidState pid;
    const auto [omega, next] = pid_update(pid, e, p.dt, PidGains{kp, 0, 0, 1});
    CHECK(omega == kp * e);
    (void)next;
  }
}

TEST_CASE("tracking a straight two-waypoint trajectory") {
  MapSpec map;
  map.workspace = {0, 0, 10, 1};
  map.regions.push_back({"start", RegionKind::Start, {0, 0, 10, 1}, ""});
  const CellGraph g = decompose(map);
  REQUIRE(g.cells.size() == 1);

  Trajectory traj;
  traj.waypoints.push_back({{0.5, 0.5}, 0});
  traj.waypoints.push_back({{8.5, 0.5}, 0});
  traj.stage_boundaries = {0};

  const SimTrace trace = track_trajectory(traj, {}, {}, g);
  CHECK(trace.success);
  CHECK(trace.waypoints_reached == 2);
  for (const auto& s : trace.steps) CHECK(std::abs(s.state.theta) < 1e-6);
  // Time advances by dt each tick.
  for (std::size_t i = 1; i < trace.steps.size(); ++i)
    CHECK(trace.steps[i].t ==
          doctest::Approx(trace.steps[i - 1].t + 0.02).epsilon(1e-12));

  SUBCASE("one-tick timeout fails before the first waypoint") {
    TrackerConfig strict;
    strict.waypoint_timeout = 0.02;
    const SimTrace fail = track_trajectory(traj, {}, {}, g, nullptr, strict);
    CHECK(!fail.success);
    CHECK(fail.waypoints_reached == 0);
  }
}

TEST_CASE("monitor failure on a forbidden cell") {
  MapSpec map;
  map.workspace = {0, 0, 3, 1};
  map.regions.push_back({"start", RegionKind::Start, {0, 0, 1, 1}, ""});
  map.regions.push_back({"goal1", RegionKind::Goal, {2, 0, 3, 1}, "g1"});
  map.regions.push_back({"nogo", RegionKind::Avoid, {1, 0, 2, 1}, "us"});
  const CellGraph g = decompose(map);
  const Dfa d3 = compile_dfa(parse_ltl("F(g1) & G(g1 -> X G(!us))"));
  Trajectory traj;
  traj.waypoints.push_back({{2.5, 0.5}, *locate_cell(g, {2.5, 0.5})});
  traj.waypoints.push_back({{1.5, 0.5}, *locate_cell(g, {1.5, 0.5})});
  traj.stage_boundaries = {0};
  // Starting on g1 fires the trigger; driving into us must trap the monitor.
  const SimTrace trace = track_trajectory(traj, {}, {}, g, &d3);
  CHECK(!trace.success);
}

TEST_CASE("sim trace CSV carries the summary line") {
  MapSpec map;
  map.workspace = {0, 0, 4, 1};
  map.regions.push_back({"start", RegionKind::Start, {0, 0, 4, 1}, ""});
  const CellGraph g = decompose(map);
  Trajectory traj;
  traj.waypoints.push_back({{0.5, 0.5}, 0});
  traj.waypoints.push_back({{3.5, 0.5}, 0});
  traj.stage_boundaries = {0};
  const SimTrace trace = track_trajectory(traj, {}, {}, g);
  const std::string csv = sim_trace_to_csv(trace);
  CHECK(csv.rfind("t,x,y,theta,e_dist,e_head,v_left,v_right", 0) == 0);
  CHECK(csv.find("# success=1 waypoints_reached=2") != std::string::npos);
}
