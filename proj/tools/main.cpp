#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ltlplan/errors.hpp"
#include "ltlplan/nl_frontend.hpp"
#include "ltlplan/pipeline.hpp"
#include "ltlplan/svg.hpp"

namespace fs = std::filesystem;
using namespace ltlplan;

namespace {

// Exit codes, one per failure class.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitDegenerateGrid = 3;
constexpr int kExitNoPlan = 4;
constexpr int kExitPlanFailure = 5;
constexpr int kExitUnsupportedTask = 6;
constexpr int kExitTrackingFailed = 7;

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

struct PlanOptions {
  std::string map_path;
  std::string ltl;
  std::string prompt;
  std::string algo = "rrt";
  std::string mode = "hierarchical";
  std::string out_dir = "out";
  std::string seeds_range;
  int inflation = 1;
  PlannerConfig planner;
  LlmEndpointConfig llm;
  bool use_llm = false;
};

std::string resolve_task(const PlanOptions& opt, const MapSpec& map) {
  if (!opt.ltl.empty()) return opt.ltl;
  if (opt.use_llm) {
    const auto r = translate_llm(opt.prompt, opt.llm, map.atoms());
    std::cerr << "translated via "
              << (r.source == TranslationSource::Llm ? "llm" : "rules fallback")
              << ": " << r.formula_text << '\n';
    return r.formula_text;
  }
  return translate_rules(opt.prompt, map.atoms());
}

int run_plan_once(const PlanOptions& opt, const MapSpec& map,
                  const std::string& task, std::uint64_t seed,
                  const fs::path& out_dir) {
  PlannerConfig cfg = opt.planner;
  cfg.rng_seed = seed;
  const PlannerAlgo algo = opt.algo == "prm" ? PlannerAlgo::Prm : PlannerAlgo::Rrt;

  write_file(out_dir / "formula.txt", task + "\n");

  PlannerDebug debug;
  CellGraph graph;
  Dfa dfa;
  HighLevelPlan plan;
  Trajectory traj;

  if (opt.mode == "hierarchical") {
    auto result = plan_hierarchical(map, task, algo, cfg, opt.inflation, &debug);
    graph = std::move(result.graph);
    dfa = std::move(result.dfa);
    plan = std::move(result.plan);
    traj = std::move(result.trajectory);
    write_file(out_dir / "dfa.dot", dfa_to_dot(dfa));
    write_file(out_dir / "plan.json", plan_to_json(plan));
    write_file(out_dir / "plan.svg", svg_plan(graph, map, plan));
  } else {
    const Formula formula = parse_ltl(task);
    dfa = compile_dfa(formula);
    write_file(out_dir / "dfa.dot", dfa_to_dot(dfa));
    graph = decompose(map);
    const GoalSchedule schedule = derive_goal_schedule(dfa, graph);
    traj = goal_schedule_plan(schedule.goals, schedule.per_stage_excluded,
                              map.start().rect.centroid(), graph, cfg, algo,
                              &debug);
  }

  // Cross-validate with the runtime monitor before reporting success.
  if (!accepts(dfa, waypoint_labels(graph, traj))) {
    std::cerr << "internal error: trajectory label trace rejected by DFA\n";
    return kExitError;
  }

  write_file(out_dir / "trajectory.csv", trajectory_to_csv(traj));
  write_file(out_dir / "trajectory.svg",
             svg_trajectory(graph, map, traj, &debug,
                            opt.mode == "hierarchical" ? &plan : nullptr));
  std::cout << "plan written to " << out_dir.string() << " ("
            << traj.waypoints.size() << " waypoints, "
            << traj.stage_boundaries.size() << " stages)\n";
  return kExitOk;
}

int run_plan(const PlanOptions& opt) {
  const MapSpec map = load_map_file(opt.map_path);
  const std::string task = resolve_task(opt, map);

  if (opt.seeds_range.empty())
    return run_plan_once(opt, map, task, opt.planner.rng_seed, opt.out_dir);

  const auto sep = opt.seeds_range.find("..");
  if (sep == std::string::npos)
    throw std::runtime_error("--seeds expects the form a..b");
  const std::uint64_t lo = std::stoull(opt.seeds_range.substr(0, sep));
  const std::uint64_t hi = std::stoull(opt.seeds_range.substr(sep + 2));
  std::vector<std::future<int>> runs;
  for (std::uint64_t s = lo; s <= hi; ++s) {
    runs.push_back(std::async(std::launch::async, [&, s] {
      return run_plan_once(opt, map, task, s,
                           fs::path(opt.out_dir) / ("seed_" + std::to_string(s)));
    }));
  }
  int rc = kExitOk;
  for (auto& r : runs) rc = std::max(rc, r.get());
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical LTL-constrained sampling-based motion planner"};
  app.require_subcommand(1);
  app.set_config("--config");

  // decompose -----------------------------------------------------------
  std::string dec_map, dec_out = "out";
  auto* dec = app.add_subcommand("decompose", "Decompose a map into cells");
  dec->add_option("--map", dec_map, "Map JSON file")->required();
  dec->add_option("--out", dec_out, "Output directory")->capture_default_str();

  // compile-dfa ---------------------------------------------------------
  std::string cd_ltl, cd_out = "out";
  auto* cd = app.add_subcommand("compile-dfa", "Compile an LTL formula to a DFA");
  cd->add_option("--ltl", cd_ltl, "LTL formula text")->required();
  cd->add_option("--out", cd_out, "Output directory")->capture_default_str();

  // translate -----------------------------------------------------------
  std::string tr_map, tr_text;
  LlmEndpointConfig tr_llm;
  bool tr_use_llm = false;
  auto* tr = app.add_subcommand("translate", "Translate a task prompt to LTL");
  tr->add_option("--map", tr_map, "Map JSON file (atom vocabulary)")->required();
  tr->add_option("--text", tr_text, "Task prompt")->required();
  tr->add_option("--llm-url", tr_llm.base_url, "Chat-completion endpoint base URL");
  tr->add_option("--llm-model", tr_llm.model_name, "Model name");
  tr->add_option("--llm-timeout", tr_llm.timeout_seconds, "Request timeout (s)")
      ->capture_default_str();

  // plan ----------------------------------------------------------------
  PlanOptions plan_opt;
  auto* pl = app.add_subcommand("plan", "Plan a trajectory for an LTL task");
  pl->add_option("--map", plan_opt.map_path, "Map JSON file")->required();
  auto* pl_ltl = pl->add_option("--ltl", plan_opt.ltl, "LTL formula text");
  auto* pl_prompt =
      pl->add_option("--prompt", plan_opt.prompt, "Natural-language task prompt");
  pl_ltl->excludes(pl_prompt);
  pl->add_option("--algo", plan_opt.algo, "Low-level planner")
      ->check(CLI::IsMember({"rrt", "prm"}))
      ->capture_default_str();
  pl->add_option("--mode", plan_opt.mode, "Planning mode")
      ->check(CLI::IsMember({"hierarchical", "goal-schedule"}))
      ->capture_default_str();
  pl->add_option("--out", plan_opt.out_dir, "Output directory")
      ->capture_default_str();
  pl->add_option("--seed", plan_opt.planner.rng_seed, "RNG seed")
      ->capture_default_str();
  pl->add_option("--seeds", plan_opt.seeds_range,
                 "Seed sweep a..b (per-seed output subdirectories)");
  pl->add_option("--inflation", plan_opt.inflation,
                 "Corridor widening rings (calibration default)")
      ->capture_default_str();
  pl->add_option("--max-iterations", plan_opt.planner.max_iterations,
                 "RRT iteration budget K")
      ->capture_default_str();
  pl->add_option("--step-size", plan_opt.planner.step_size,
                 "RRT step size (workspace units)")
      ->capture_default_str();
  pl->add_option("--prm-nodes", plan_opt.planner.prm_nodes, "PRM roadmap size N")
      ->capture_default_str();
  pl->add_option("--prm-neighbors", plan_opt.planner.prm_neighbors,
                 "PRM neighbor count k")
      ->capture_default_str();
  pl->add_option("--goal-radius", plan_opt.planner.goal_radius,
                 "Goal arrival radius (calibration default)")
      ->capture_default_str();
  pl->add_option("--edge-resolution", plan_opt.planner.edge_check_resolution,
                 "Edge validity check spacing")
      ->capture_default_str();
  pl->add_option("--llm-url", plan_opt.llm.base_url,
                 "Chat-completion endpoint base URL (prompt mode)");
  pl->add_option("--llm-model", plan_opt.llm.model_name, "Model name");

  // simulate ------------------------------------------------------------
  std::string sim_map, sim_traj, sim_ltl, sim_out = "out";
  DiffDriveParams sim_params;
  PidGains sim_gains;
  TrackerConfig sim_tracker;
  auto* sim = app.add_subcommand("simulate",
                                 "Track a trajectory with the kinematic model");
  sim->add_option("--map", sim_map, "Map JSON file")->required();
  sim->add_option("--trajectory", sim_traj, "Trajectory CSV file")->required();
  sim->add_option("--ltl", sim_ltl, "Optional LTL formula for runtime monitoring");
  sim->add_option("--out", sim_out, "Output directory")->capture_default_str();
  sim->add_option("--dt", sim_params.dt, "Integration step (s)")
      ->capture_default_str();
  sim->add_option("--wheelbase", sim_params.wheelbase, "Wheelbase L")
      ->capture_default_str();
  sim->add_option("--v-max", sim_params.v_max, "Linear speed limit")
      ->capture_default_str();
  sim->add_option("--wheel-max", sim_params.wheel_speed_max, "Wheel speed limit")
      ->capture_default_str();
  sim->add_option("--kp", sim_gains.kp, "Proportional gain")->capture_default_str();
  sim->add_option("--ki", sim_gains.ki, "Integral gain")->capture_default_str();
  sim->add_option("--kd", sim_gains.kd, "Derivative gain")->capture_default_str();
  sim->add_option("--integral-limit", sim_gains.integral_limit,
                  "Anti-windup clamp")
      ->capture_default_str();
  sim->add_option("--waypoint-radius", sim_tracker.waypoint_radius,
                  "Waypoint arrival radius")
      ->capture_default_str();
  sim->add_option("--waypoint-timeout", sim_tracker.waypoint_timeout,
                  "Per-waypoint timeout (s)")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (dec->parsed()) {
      const MapSpec map = load_map_file(dec_map);
      const CellGraph graph = decompose(map);
      write_file(fs::path(dec_out) / "decomposition.svg",
                 svg_decomposition(graph, map));
      write_file(fs::path(dec_out) / "cells.csv", cells_to_csv(graph));
      std::cout << graph.cells.size() << " cells (" << graph.free_cell_count()
                << " free), " << graph.edges.size() << " directed edges\n";
      return kExitOk;
    }
    if (cd->parsed()) {
      const Dfa dfa = compile_dfa(parse_ltl(cd_ltl));
      write_file(fs::path(cd_out) / "dfa.dot", dfa_to_dot(dfa));
      std::cout << dfa.state_count() << " states, "
                << (dfa.trap ? "with" : "no") << " trap state\n";
      return kExitOk;
    }
    if (tr->parsed()) {
      const MapSpec map = load_map_file(tr_map);
      if (!tr_llm.base_url.empty()) {
        if (const char* key = std::getenv("LTLPLAN_LLM_API_KEY"))
          tr_llm.api_key = key;
        const auto r = translate_llm(tr_text, tr_llm, map.atoms());
        const char* src = r.source == TranslationSource::Llm ? "llm" : "rules";
        std::cout << r.formula_text << '\n';
        std::cerr << "source: " << src << '\n';
      } else {
        std::cout << translate_rules(tr_text, map.atoms()) << '\n';
      }
      return kExitOk;
    }
    if (pl->parsed()) {
      if (plan_opt.ltl.empty() == plan_opt.prompt.empty())
        throw std::runtime_error("provide exactly one of --ltl or --prompt");
      if (!plan_opt.llm.base_url.empty()) {
        plan_opt.use_llm = true;
        if (const char* key = std::getenv("LTLPLAN_LLM_API_KEY"))
          plan_opt.llm.api_key = key;
      }
      return run_plan(plan_opt);
    }
    if (sim->parsed()) {
      const MapSpec map = load_map_file(sim_map);
      const CellGraph graph = decompose(map);
      std::ifstream in(sim_traj);
      if (!in) throw ParseError("cannot open trajectory file '" + sim_traj + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      const Trajectory traj = trajectory_from_csv(ss.str(), graph);
      std::optional<Dfa> dfa;
      if (!sim_ltl.empty()) dfa = compile_dfa(parse_ltl(sim_ltl));
      const SimTrace trace = track_trajectory(
          traj, sim_params, sim_gains, graph, dfa ? &*dfa : nullptr, sim_tracker);
      write_file(fs::path(sim_out) / "sim_trace.csv", sim_trace_to_csv(trace));
      std::cout << "success=" << (trace.success ? 1 : 0)
                << " waypoints_reached=" << trace.waypoints_reached << '\n';
      return trace.success ? kExitOk : kExitTrackingFailed;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const UnsupportedFragment& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const NoGoalsRecognized& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const AmbiguousOrder& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const DegenerateGrid& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerateGrid;
  } catch (const NoPlan& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoPlan;
  } catch (const PlanFailure& e) {
    std::cerr << "error: " << e.what();
    if (e.stage >= 0) std::cerr << " (stage " << e.stage << ")";
    std::cerr << '\n';
    return kExitPlanFailure;
  } catch (const UnsupportedTask& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnsupportedTask;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
