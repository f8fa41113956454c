#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ltlplan/errors.hpp"
#include "ltlplan/nl_frontend.hpp"
#include "ltlplan/pipeline.hpp"
#include "ltlplan/svg.hpp"

namespace py = pybind11;
using namespace ltlplan;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hierarchical LTL-constrained sampling-based motion planner";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<UnsupportedFragment>(m, "UnsupportedFragment");
  py::register_exception<UnsupportedTask>(m, "UnsupportedTask");
  py::register_exception<NoPlan>(m, "NoPlanError");
  py::register_exception<PlanFailure>(m, "PlanFailureError");

  py::class_<Point>(m, "Point")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &Point::x)
      .def_readwrite("y", &Point::y)
      .def("__repr__", [](const Point& p) {
        return "Point(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
      });

  py::class_<Rect>(m, "Rect")
      .def(py::init<double, double, double, double>(), py::arg("x_min"),
           py::arg("y_min"), py::arg("x_max"), py::arg("y_max"))
      .def_readwrite("x_min", &Rect::x_min)
      .def_readwrite("y_min", &Rect::y_min)
      .def_readwrite("x_max", &Rect::x_max)
      .def_readwrite("y_max", &Rect::y_max)
      .def("centroid", &Rect::centroid)
      .def("area", &Rect::area);

  py::class_<MapSpec>(m, "MapSpec")
      .def_readonly("workspace", &MapSpec::workspace)
      .def("atoms", &MapSpec::atoms)
      .def("start_centroid",
           [](const MapSpec& map) { return map.start().rect.centroid(); })
      .def("__len__", [](const MapSpec& map) { return map.regions.size(); });

  py::class_<Cell>(m, "Cell")
      .def_readonly("id", &Cell::id)
      .def_readonly("rect", &Cell::rect)
      .def_readonly("atoms", &Cell::atoms)
      .def_readonly("free", &Cell::free);

  py::class_<CellGraph>(m, "CellGraph")
      .def_readonly("cells", &CellGraph::cells)
      .def_readonly("edges", &CellGraph::edges)
      .def("free_cell_count", &CellGraph::free_cell_count)
      .def("neighbors",
           [](const CellGraph& g, int id) { return neighbors(g, id); });

  py::class_<Formula>(m, "Formula")
      .def("atoms", &Formula::atoms)
      .def("__str__", &Formula::str);

  py::class_<Dfa>(m, "Dfa")
      .def_readonly("state_names", &Dfa::state_names)
      .def_readonly("initial", &Dfa::initial)
      .def_readonly("accepting", &Dfa::accepting)
      .def_readonly("trap", &Dfa::trap)
      .def("state_count", &Dfa::state_count)
      .def("step",
           [](const Dfa& d, int state, const std::set<std::string>& label) {
             return dfa_step(d, state, label);
           })
      .def("accepts", [](const Dfa& d, const std::vector<LabelSet>& trace) {
        return accepts(d, trace);
      })
      .def("to_dot", [](const Dfa& d) { return dfa_to_dot(d); });

  py::class_<ProductState>(m, "ProductState")
      .def_readonly("cell", &ProductState::cell)
      .def_readonly("q", &ProductState::q);

  py::class_<PlanStage>(m, "PlanStage")
      .def_readonly("dfa_from", &PlanStage::dfa_from)
      .def_readonly("dfa_to", &PlanStage::dfa_to)
      .def_readonly("cell_path", &PlanStage::cell_path)
      .def_readonly("allowed", &PlanStage::allowed)
      .def_readonly("target_atoms", &PlanStage::target_atoms);

  py::class_<HighLevelPlan>(m, "HighLevelPlan")
      .def_readonly("stages", &HighLevelPlan::stages)
      .def("to_json", &plan_to_json);

  py::class_<PlannerConfig>(m, "PlannerConfig")
      .def(py::init<>())
      .def_readwrite("max_iterations", &PlannerConfig::max_iterations)
      .def_readwrite("step_size", &PlannerConfig::step_size)
      .def_readwrite("prm_nodes", &PlannerConfig::prm_nodes)
      .def_readwrite("prm_neighbors", &PlannerConfig::prm_neighbors)
      .def_readwrite("goal_radius", &PlannerConfig::goal_radius)
      .def_readwrite("edge_check_resolution", &PlannerConfig::edge_check_resolution)
      .def_readwrite("rng_seed", &PlannerConfig::rng_seed);

  py::class_<SamplePoint>(m, "SamplePoint")
      .def_readonly("position", &SamplePoint::position)
      .def_readonly("cell", &SamplePoint::cell);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("waypoints", &Trajectory::waypoints)
      .def_readonly("stage_boundaries", &Trajectory::stage_boundaries)
      .def("to_csv", &trajectory_to_csv);

  py::enum_<PlannerAlgo>(m, "PlannerAlgo")
      .value("RRT", PlannerAlgo::Rrt)
      .value("PRM", PlannerAlgo::Prm);

  py::class_<DiffDriveParams>(m, "DiffDriveParams")
      .def(py::init<>())
      .def_readwrite("wheelbase", &DiffDriveParams::wheelbase)
      .def_readwrite("v_max", &DiffDriveParams::v_max)
      .def_readwrite("wheel_speed_max", &DiffDriveParams::wheel_speed_max)
      .def_readwrite("dt", &DiffDriveParams::dt);

  py::class_<PidGains>(m, "PidGains")
      .def(py::init<>())
      .def_readwrite("kp", &PidGains::kp)
      .def_readwrite("ki", &PidGains::ki)
      .def_readwrite("kd", &PidGains::kd)
      .def_readwrite("integral_limit", &PidGains::integral_limit);

  py::class_<RobotState>(m, "RobotState")
      .def(py::init<>())
      .def_readwrite("x", &RobotState::x)
      .def_readwrite("y", &RobotState::y)
      .def_readwrite("theta", &RobotState::theta);

  py::class_<SimTrace>(m, "SimTrace")
      .def_readonly("success", &SimTrace::success)
      .def_readonly("waypoints_reached", &SimTrace::waypoints_reached)
      .def("__len__", [](const SimTrace& t) { return t.steps.size(); })
      .def("to_csv", &sim_trace_to_csv);

  py::class_<PipelineResult>(m, "PipelineResult")
      .def_readonly("graph", &PipelineResult::graph)
      .def_readonly("dfa", &PipelineResult::dfa)
      .def_readonly("plan", &PipelineResult::plan)
      .def_readonly("trajectory", &PipelineResult::trajectory);

  m.def("load_map", &load_map, py::arg("text"));
  m.def("load_map_file", &load_map_file, py::arg("path"));
  m.def("save_map", &save_map);
  m.def("decompose", &decompose);
  m.def("locate_cell", &locate_cell);
  m.def("parse_ltl", &parse_ltl);
  m.def("compile_dfa", &compile_dfa);
  m.def("eval_finite_trace", &eval_finite_trace);
  m.def("translate_rules", &translate_rules, py::arg("text"),
        py::arg("known_atoms"));
  m.def(
      "plan_hierarchical",
      [](const MapSpec& map, const std::string& ltl, PlannerAlgo algo,
         const PlannerConfig& cfg, int inflation) {
        return plan_hierarchical(map, ltl, algo, cfg, inflation);
      },
      py::arg("map"), py::arg("ltl"), py::arg("algo") = PlannerAlgo::Rrt,
      py::arg("config") = PlannerConfig{}, py::arg("inflation") = 1);
  m.def(
      "track_trajectory",
      [](const Trajectory& traj, const DiffDriveParams& p, const PidGains& gains,
         const CellGraph& g, const Dfa* dfa) {
        return track_trajectory(traj, p, gains, g, dfa);
      },
      py::arg("trajectory"), py::arg("params") = DiffDriveParams{},
      py::arg("gains") = PidGains{}, py::arg("graph"),
      py::arg("dfa") = nullptr);
  m.def("svg_decomposition", &svg_decomposition);
  m.def("svg_plan", &svg_plan);
}
