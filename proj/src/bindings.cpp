#include <pybind11/pybind11.h>

#include <string>

#include "jointgen/design_io.hpp"
#include "jointgen/exporters.hpp"
#include "jointgen/insertion_graph.hpp"
#include "jointgen/optimize.hpp"
#include "jointgen/seeds.hpp"
#include "jointgen/simulate.hpp"
#include "jointgen/stability.hpp"

namespace py = pybind11;
using namespace jointgen;

namespace {

ErrorModel errors_of(const DesignFile& df) {
  return df.errors ? *df.errors : ErrorModel{};
}

}  // namespace

PYBIND11_MODULE(_jointgen, m) {
  m.doc() = "planar insertion joint design (JSON string interface)";
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def(
      "validate",
      [](const std::string& text) {
        DesignFile df = parse_design_file(text);
        return validation_json(validate_design(df.design));
      },
      py::arg("design_json"));

  m.def(
      "canonical",
      [](const std::string& text) {
        DesignFile df = parse_design_file(text);
        const ErrorModel e = errors_of(df);
        return serialize_design(canonicalize(df.design),
                                df.errors ? &e : nullptr);
      },
      py::arg("design_json"));

  m.def(
      "analyze",
      [](const std::string& text, double friction) {
        DesignFile df = parse_design_file(text);
        GraphParams gp;
        gp.mu = friction;
        return report_json(insertion_report(df.design, errors_of(df), gp));
      },
      py::arg("design_json"), py::arg("friction") = 0.0);

  m.def(
      "stability",
      [](const std::string& text, double friction) {
        DesignFile df = parse_design_file(text);
        GraphParams gp;
        gp.mu = friction;
        return stability_json(stability_summary(df.design, errors_of(df), gp));
      },
      py::arg("design_json"), py::arg("friction") = 0.0);

  m.def(
      "optimize",
      [](const std::string& text, double edge_step_deg, double point_step_frac,
         double friction) {
        DesignFile df = parse_design_file(text);
        OptimizerParams p;
        p.edge_step_deg = edge_step_deg;
        p.point_step_frac = point_step_frac;
        p.graph.mu = friction;
        return trace_json(optimize(df.design, errors_of(df), p));
      },
      py::arg("design_json"), py::arg("edge_step_deg") = 0.5,
      py::arg("point_step") = 0.01, py::arg("friction") = 0.0);

  m.def(
      "simulate",
      [](const std::string& text, double dx, double dtheta, double friction,
         bool record) {
        DesignFile df = parse_design_file(text);
        SimParams sp;
        sp.mu = friction;
        sp.record = record;
        Config q0;
        q0.rotation = dtheta;
        q0.translation = {dx, entry_height(df.design, dx, dtheta)};
        const auto goals = goal_modes_at(df.design);
        return sim_json(simulate_insertion(df.design, q0, goals, sp));
      },
      py::arg("design_json"), py::arg("dx") = 0.0, py::arg("dtheta") = 0.0,
      py::arg("friction") = 0.0, py::arg("record") = false);

  m.def(
      "seed_design",
      [](int points, int edges, uint64_t seed) {
        SeedParams sp;
        sp.points = points;
        sp.edges = edges;
        sp.seed = seed;
        return serialize_design(make_seed_design(sp));
      },
      py::arg("points") = 5, py::arg("edges") = 5, py::arg("seed") = 1);

  m.def(
      "export_svg",
      [](const std::string& text) {
        DesignFile df = parse_design_file(text);
        GraphParams gp;
        const StabilitySummary sum =
            stability_summary(df.design, errors_of(df), gp);
        std::vector<Config> poses;
        const ForceCone* cone = nullptr;
        if (sum.has_seat) {
          poses.push_back(sum.sinks.front().seat);
          if (sum.cone.valid) cone = &sum.cone;
        } else {
          Config q;
          q.translation = {0.0, entry_height(df.design, 0.0, 0.0)};
          poses.push_back(q);
        }
        return svg_design(df.design, poses, cone);
      },
      py::arg("design_json"));

  m.def(
      "export_obj",
      [](const std::string& text, double separation) {
        DesignFile df = parse_design_file(text);
        if (separation != 0.0 && separation != 90.0 && separation != 120.0)
          throw ParseError("separation must be 0, 90 or 120");
        return obj_text(peg_mesh(df.design, separation), "peg") +
               obj_text(socket_mesh(df.design, separation), "socket");
      },
      py::arg("design_json"), py::arg("separation") = 0.0);
}
