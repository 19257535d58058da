#include <CLI11.hpp>
#include <json.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "jointgen/design_io.hpp"
#include "jointgen/exporters.hpp"
#include "jointgen/insertion_graph.hpp"
#include "jointgen/optimize.hpp"
#include "jointgen/seeds.hpp"
#include "jointgen/simulate.hpp"
#include "jointgen/stability.hpp"

using namespace jointgen;
using nlohmann::json;

namespace {

struct Common {
  std::string design_path;
  std::string errors_path;
  std::string out_path;
  double eps = -1.0;
  double friction = 0.0;
};

void add_common(CLI::App* cmd, Common& c, bool need_design = true) {
  auto* d = cmd->add_option("--design", c.design_path, "design JSON file");
  if (need_design) d->required();
  cmd->add_option("--errors", c.errors_path, "error model JSON file");
  cmd->add_option("--eps", c.eps,
                  "error box shorthand: dx = eps * mouth width, "
                  "dtheta = eps rad, scale = eps");
  cmd->add_option("--friction", c.friction, "friction coefficient");
}

ErrorModel file_error_model(const std::string& path) {
  const json j = json::parse(read_file(path));
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  ErrorModel e;
  for (const auto& [k, v] : j.items()) {
    if (k == "dx")
      e.dx = v.get<double>();
    else if (k == "dtheta")
      e.dtheta = v.get<double>();
    else if (k == "scale")
      e.scale = v.get<double>();
    else
      throw ParseError(path + ": unknown key '" + k + "'");
  }
  if (e.dx < 0 || e.dtheta < 0 || e.scale < 0 || e.scale >= 1)
    throw ParseError(path + ": error bounds out of range");
  return e;
}

// Priority: --eps, then --errors file, then the design file's own block.
ErrorModel resolve_errors(const DesignFile& df, const Common& c) {
  if (c.eps >= 0.0) {
    ErrorModel e;
    e.dx = c.eps * df.design.socket.mouth_width();
    e.dtheta = c.eps;
    e.scale = c.eps;
    return e;
  }
  if (!c.errors_path.empty()) return file_error_model(c.errors_path);
  if (df.errors) return *df.errors;
  return ErrorModel{};
}

DesignFile load_design(const Common& c) {
  DesignFile df = parse_design_file(read_file(c.design_path));
  const ValidationReport v = validate_design(df.design);
  if (!v.valid()) {
    std::cerr << validation_json(v);
    throw ParseError(c.design_path + ": design fails validation");
  }
  return df;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_file_atomic(out_path, text);
}

int run_analyze(const Common& c) {
  const DesignFile df = load_design(c);
  const ErrorModel e = resolve_errors(df, c);
  GraphParams gp;
  gp.mu = c.friction;
  const InsertionReport rep = insertion_report(df.design, e, gp);
  const StabilitySummary sum = stability_summary(df.design, e, gp, rep);
  json j = json::parse(report_json(rep));
  j["stability"] = json::parse(stability_json(sum));
  emit(j.dump(2) + "\n", c.out_path);
  return rep.insertable ? 0 : 1;
}

int run_optimize(const Common& c, const OptimizerParams& p,
                 const std::string& design_out) {
  const DesignFile df = load_design(c);
  const ErrorModel e = resolve_errors(df, c);
  const OptimizationTrace trace = optimize(df.design, e, p);
  emit(trace_json(trace), c.out_path);
  if (!design_out.empty() && !trace.stages.empty())
    write_file_atomic(design_out,
                      serialize_design(trace.stages.back().design, &e));
  return trace.success ? 0 : 1;
}

int run_simulate(const Common& c, bool record, double disturb_deg,
                 bool has_disturb) {
  const DesignFile df = load_design(c);
  const ErrorModel e = resolve_errors(df, c);
  SimParams sp;
  sp.mu = c.friction;
  sp.record = record;
  GraphParams gp;
  gp.mu = c.friction;

  if (has_disturb) {
    const StabilitySummary sum = stability_summary(df.design, e, gp);
    if (!sum.has_seat) {
      std::cerr << "no seated sink to disturb\n";
      return 1;
    }
    const SinkStability& sink = sum.sinks.front();
    const JointDesign scaled = scale_design(df.design, sink.scale);
    std::vector<ContactMode> capture{sink.seat_mode};
    const bool holds = disturbance_holds(scaled, sink.seat, capture,
                                         disturb_deg * kPi / 180.0, sp);
    json j;
    j["phi_deg"] = disturb_deg;
    j["holds"] = holds;
    emit(j.dump(2) + "\n", c.out_path);
    return holds ? 0 : 1;
  }

  json runs = json::array();
  int seated = 0, total = 0;
  SimResult last;
  for (double s : e.scale_extremes()) {
    const JointDesign scaled = scale_design(df.design, s);
    const auto goals = goal_modes_at(scaled);
    for (const Config& q0 : entry_poses(scaled, e)) {
      const SimResult r = simulate_insertion(scaled, q0, goals, sp);
      json jr;
      jr["scale"] = s;
      jr["start"] = {q0.translation.x, q0.translation.y, q0.rotation};
      jr["verdict"] = verdict_name(r.verdict);
      jr["steps"] = r.steps;
      runs.push_back(jr);
      ++total;
      if (r.verdict == SimVerdict::Seated) {
        ++seated;
        last = r;
      }
    }
  }
  json j;
  j["runs"] = runs;
  j["seated"] = seated;
  j["total"] = total;
  if (record && last.steps > 0) j["last_seated"] = json::parse(sim_json(last));
  emit(j.dump(2) + "\n", c.out_path);
  return seated == total ? 0 : 1;
}

int run_sweep(const Common& c, const OptimizerParams& p, uint64_t seed,
              const std::string& cells_arg) {
  ErrorModel e;
  if (c.eps >= 0.0) {
    e.dx = c.eps;
    e.dtheta = c.eps;
    e.scale = c.eps;
  } else if (!c.errors_path.empty()) {
    e = file_error_model(c.errors_path);
  } else {
    e.dx = 0.02;
    e.dtheta = 0.04;
    e.scale = 0.01;
  }
  std::vector<std::pair<int, int>> cells;
  if (cells_arg.empty()) {
    cells = default_sweep_cells();
  } else {
    std::string tok;
    std::istringstream in(cells_arg);
    while (std::getline(in, tok, ',')) {
      const auto x = tok.find('x');
      if (x == std::string::npos)
        throw ParseError("--cells expects entries like 5x5");
      cells.emplace_back(std::stoi(tok.substr(0, x)),
                         std::stoi(tok.substr(x + 1)));
    }
  }
  const auto result = sweep_mn(cells, e, p, seed);
  emit(sweep_json(result), c.out_path);
  for (const SweepCell& cell : result)
    if (!cell.trace.success) return 1;
  return 0;
}

int run_export(const Common& c, const std::string& format, double separation,
               const std::string& before_path) {
  const DesignFile df = load_design(c);
  const ErrorModel e = resolve_errors(df, c);

  if (format == "svg") {
    GraphParams gp;
    gp.mu = c.friction;
    const StabilitySummary sum = stability_summary(df.design, e, gp);
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
    DesignFile before;
    if (!before_path.empty()) {
      Common bc = c;
      bc.design_path = before_path;
      before = load_design(bc);
    }
    emit(svg_design(df.design, poses, cone, nullptr,
                    before_path.empty() ? nullptr : &before.design),
         c.out_path);
    return 0;
  }
  if (format == "dot") {
    GraphParams gp;
    gp.mu = c.friction;
    const InsertionGraph g = build_graph(df.design, e, gp);
    emit(dot_graph(g, analyze_graph(g)), c.out_path);
    return 0;
  }
  if (format == "obj") {
    if (separation != 0.0 && separation != 90.0 && separation != 120.0)
      throw ParseError("--separation must be 0, 90 or 120");
    const TriMesh peg = peg_mesh(df.design, separation);
    const TriMesh socket = socket_mesh(df.design, separation);
    emit(obj_text(peg, "peg") + obj_text(socket, "socket"), c.out_path);
    return 0;
  }
  throw ParseError("--format must be svg, dot or obj");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar insertion joint analysis and design"};
  app.require_subcommand(1);

  Common ca, co, cs, cw, ce;
  OptimizerParams opt_p, sweep_p;
  std::string design_out, cells_arg, format;
  uint64_t seed = 1;
  bool record = false;
  double disturb_deg = 0.0;
  double separation = 0.0;

  CLI::App* analyze = app.add_subcommand("analyze", "insertion graph, sinks, stability");
  add_common(analyze, ca);
  analyze->add_option("--out", ca.out_path, "output JSON path (default stdout)");

  CLI::App* optimize_cmd = app.add_subcommand("optimize", "repair insertion, then improve stability");
  add_common(optimize_cmd, co);
  optimize_cmd->add_option("--out", co.out_path, "trace JSON path");
  optimize_cmd->add_option("--design-out", design_out, "optimized design JSON path");
  optimize_cmd->add_option("--edge-step-deg", opt_p.edge_step_deg, "socket edge rotation step");
  optimize_cmd->add_option("--point-step", opt_p.point_step_frac, "peg point slide step, fraction of shortest edge");

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "batch insertion or disturbance runs");
  add_common(simulate_cmd, cs);
  simulate_cmd->add_option("--out", cs.out_path, "output JSON path");
  simulate_cmd->add_flag("--record", record, "include the last seated trajectory");
  CLI::Option* disturb =
      simulate_cmd->add_option("--disturb-deg", disturb_deg, "push the seated peg at this angle from the insertion axis");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "optimize seeded designs over point/edge counts");
  add_common(sweep_cmd, cw, false);
  sweep_cmd->add_option("--out", cw.out_path, "output JSON path");
  sweep_cmd->add_option("--seed", seed, "seed for the initial designs");
  sweep_cmd->add_option("--cells", cells_arg, "comma list like 4x5,5x5,6x6");
  sweep_cmd->add_option("--edge-step-deg", sweep_p.edge_step_deg, "socket edge rotation step");
  sweep_cmd->add_option("--point-step", sweep_p.point_step_frac, "peg point slide step, fraction of shortest edge");

  CLI::App* seed_cmd = app.add_subcommand("seed", "write a seeded initial design");
  int seed_points = 5, seed_edges = 5;
  uint64_t seed_value = 1;
  std::string seed_out;
  seed_cmd->add_option("--points", seed_points, "peg contact point count");
  seed_cmd->add_option("--edges", seed_edges, "socket edge count");
  seed_cmd->add_option("--seed", seed_value, "random seed");
  seed_cmd->add_option("--out", seed_out, "output JSON path (default stdout)");

  CLI::App* export_cmd = app.add_subcommand("export", "svg, dot or obj output");
  add_common(export_cmd, ce);
  export_cmd->add_option("--out", ce.out_path, "output path (default stdout)");
  export_cmd->add_option("--format", format, "svg|dot|obj")->required();
  export_cmd->add_option("--separation", separation, "profile station separation in degrees: 0, 90 or 120");
  std::string before_path;
  export_cmd->add_option("--before", before_path, "overlay this design under the main one (svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) return run_analyze(ca);
    if (optimize_cmd->parsed()) {
      opt_p.graph.mu = co.friction;
      return run_optimize(co, opt_p, design_out);
    }
    if (simulate_cmd->parsed())
      return run_simulate(cs, record, disturb_deg, disturb->count() > 0);
    if (sweep_cmd->parsed()) {
      sweep_p.graph.mu = cw.friction;
      return run_sweep(cw, sweep_p, seed, cells_arg);
    }
    if (seed_cmd->parsed()) {
      SeedParams sp;
      sp.points = seed_points;
      sp.edges = seed_edges;
      sp.seed = seed_value;
      emit(serialize_design(make_seed_design(sp)), seed_out);
      return 0;
    }
    if (export_cmd->parsed())
      return run_export(ce, format, separation, before_path);
  } catch (const ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
