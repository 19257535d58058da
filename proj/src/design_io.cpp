#include "jointgen/design_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace jointgen {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const json& member(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing");
  return *it;
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) known = true;
    if (!known) fail(path + "." + it.key(), "unknown key");
  }
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Vec2 vec2_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    fail(path, "expected [x, y]");
  return {number_at(j[0], path + "[0]"), number_at(j[1], path + "[1]")};
}

int index_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

json vec2_json(const Vec2& v) { return json::array({v.x, v.y}); }

json config_json(const Config& q) {
  return {{"x", q.translation.x}, {"y", q.translation.y},
          {"theta", q.rotation}};
}

json cone_json(const ForceCone& c) {
  return {{"valid", c.valid}, {"lo", c.lo}, {"hi", c.hi},
          {"width", c.width()}};
}

json mode_json(const ContactMode& m) {
  json pairs = json::array();
  for (const PairRef& p : m) pairs.push_back(json::array({p.point, p.edge}));
  return pairs;
}

json design_json(const JointDesign& d, const ErrorModel* errors) {
  json points = json::array();
  for (const Vec2& p : d.peg.points) points.push_back(vec2_json(p));
  json vertices = json::array();
  for (const Vec2& v : d.socket.vertices) vertices.push_back(vec2_json(v));
  json corr = json::array();
  for (const PairRef& p : d.correspondence.pairs)
    corr.push_back(json::array({p.point, p.edge}));
  json out{{"version", 1},
           {"peg",
            {{"points", points},
             {"bump_radius", d.peg.bump_radius},
             {"tip", vec2_json(d.peg.tip)}}},
           {"socket",
            {{"vertices", vertices},
             {"insertion_axis", vec2_json(d.socket.insertion_axis)}}},
           {"correspondence", corr}};
  if (errors)
    out["errors"] = {{"dx", errors->dx},
                     {"dtheta", errors->dtheta},
                     {"scale", errors->scale}};
  return out;
}

}  // namespace

DesignFile parse_design_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("$: ") + e.what());
  }
  const std::string root = "$";
  if (!j.is_object()) fail(root, "expected an object");
  reject_unknown(j, root,
                 {"version", "peg", "socket", "correspondence", "errors"});

  int version = index_at(member(j, root, "version"), root + ".version");
  if (version != 1) fail(root + ".version", "unsupported version");

  DesignFile out;

  const json& peg = member(j, root, "peg");
  reject_unknown(peg, root + ".peg", {"points", "bump_radius", "tip"});
  const json& points = member(peg, root + ".peg", "points");
  if (!points.is_array()) fail(root + ".peg.points", "expected an array");
  for (size_t i = 0; i < points.size(); ++i)
    out.design.peg.points.push_back(vec2_at(
        points[i], root + ".peg.points[" + std::to_string(i) + "]"));
  out.design.peg.bump_radius = number_at(member(peg, root + ".peg", "bump_radius"),
                                         root + ".peg.bump_radius");
  out.design.peg.tip = vec2_at(member(peg, root + ".peg", "tip"),
                               root + ".peg.tip");

  const json& socket = member(j, root, "socket");
  reject_unknown(socket, root + ".socket", {"vertices", "insertion_axis"});
  const json& vertices = member(socket, root + ".socket", "vertices");
  if (!vertices.is_array())
    fail(root + ".socket.vertices", "expected an array");
  for (size_t i = 0; i < vertices.size(); ++i)
    out.design.socket.vertices.push_back(vec2_at(
        vertices[i], root + ".socket.vertices[" + std::to_string(i) + "]"));
  out.design.socket.insertion_axis =
      vec2_at(member(socket, root + ".socket", "insertion_axis"),
              root + ".socket.insertion_axis");

  const json& corr = member(j, root, "correspondence");
  if (!corr.is_array()) fail(root + ".correspondence", "expected an array");
  for (size_t i = 0; i < corr.size(); ++i) {
    std::string p = root + ".correspondence[" + std::to_string(i) + "]";
    if (!corr[i].is_array() || corr[i].size() != 2)
      fail(p, "expected [point, edge]");
    out.design.correspondence.pairs.push_back(
        {index_at(corr[i][0], p + "[0]"), index_at(corr[i][1], p + "[1]")});
  }

  if (j.contains("errors")) {
    const json& e = j["errors"];
    reject_unknown(e, root + ".errors", {"dx", "dtheta", "scale"});
    ErrorModel em;
    em.dx = number_at(member(e, root + ".errors", "dx"), root + ".errors.dx");
    em.dtheta = number_at(member(e, root + ".errors", "dtheta"),
                          root + ".errors.dtheta");
    em.scale = number_at(member(e, root + ".errors", "scale"),
                         root + ".errors.scale");
    if (em.dx < 0.0) fail(root + ".errors.dx", "must be >= 0");
    if (em.dtheta < 0.0) fail(root + ".errors.dtheta", "must be >= 0");
    if (em.scale < 0.0 || em.scale >= 1.0)
      fail(root + ".errors.scale", "must be in [0, 1)");
    out.errors = em;
  }
  return out;
}

std::string serialize_design(const JointDesign& d, const ErrorModel* errors) {
  return design_json(d, errors).dump(2) + "\n";
}

std::string report_json(const InsertionReport& r) {
  json scales = json::array();
  for (const ScaleReport& sr : r.scales) {
    json goal = json::array();
    for (const ContactMode& m : sr.goal_modes) goal.push_back(mode_json(m));
    json sinks = json::array();
    for (const SinkInfo& s : sr.analysis.sinks) {
      json modes = json::array();
      for (int id : s.nodes) modes.push_back(mode_json(sr.graph.modes[id]));
      sinks.push_back({{"goal", s.goal}, {"modes", modes}});
    }
    json initial = json::array();
    for (int id : sr.graph.initial_nodes)
      initial.push_back(mode_json(sr.graph.modes[id]));
    scales.push_back({{"scale", sr.scale},
                      {"insertable", sr.analysis.insertable},
                      {"nodes", sr.graph.modes.size()},
                      {"undesired_sinks", sr.analysis.undesired_sinks},
                      {"trapped_entries", sr.analysis.trapped_initials.size()},
                      {"goal_modes", goal},
                      {"initial_modes", initial},
                      {"sinks", sinks}});
  }
  json out{{"insertable", r.insertable},
           {"total_undesired", r.total_undesired},
           {"total_trapped", r.total_trapped},
           {"scales", scales}};
  return out.dump(2) + "\n";
}

std::string stability_json(const StabilitySummary& s) {
  json sinks = json::array();
  for (const SinkStability& k : s.sinks)
    sinks.push_back({{"scale", k.scale},
                     {"seat_mode", mode_json(k.seat_mode)},
                     {"seat", config_json(k.seat)},
                     {"max_rotation", k.max_rotation},
                     {"force_cone", cone_json(k.cone)}});
  json out{{"has_seat", s.has_seat},
           {"max_rotation", s.max_rotation},
           {"force_cone", cone_json(s.cone)},
           {"sinks", sinks}};
  return out.dump(2) + "\n";
}

namespace {

json stage_json(const StageSnapshot& s) {
  return {{"stage", s.stage},
          {"insertable", s.insertable},
          {"undesired_sinks", s.undesired},
          {"trapped_entries", s.trapped},
          {"max_rotation", s.max_rotation},
          {"force_cone", cone_json(s.cone)},
          {"design", design_json(s.design, nullptr)}};
}

}  // namespace

std::string trace_json(const OptimizationTrace& t) {
  json stages = json::array();
  for (const StageSnapshot& s : t.stages) stages.push_back(stage_json(s));
  json out{{"success", t.success}, {"failure", t.failure},
           {"stages", stages}};
  return out.dump(2) + "\n";
}

std::string sim_json(const SimResult& r) {
  json out{{"verdict", verdict_name(r.verdict)},
           {"steps", r.steps},
           {"final", config_json(r.final_config)},
           {"final_mode", mode_json(r.final_mode)}};
  if (!r.trajectory.empty()) {
    json traj = json::array();
    for (const SimSample& s : r.trajectory) {
      json e = config_json(s.q);
      e["mode"] = mode_json(s.mode);
      traj.push_back(e);
    }
    out["trajectory"] = traj;
  }
  return out.dump(2) + "\n";
}

std::string sweep_json(const std::vector<SweepCell>& cells) {
  json arr = json::array();
  for (const SweepCell& c : cells) {
    json stages = json::array();
    for (const StageSnapshot& s : c.trace.stages) stages.push_back(stage_json(s));
    arr.push_back({{"points", c.points},
                   {"edges", c.edges},
                   {"seed", c.seed},
                   {"success", c.trace.success},
                   {"failure", c.trace.failure},
                   {"stages", stages}});
  }
  return json{{"cells", arr}}.dump(2) + "\n";
}

std::string validation_json(const ValidationReport& v) {
  json issues = json::array();
  for (const ValidationIssue& i : v.issues)
    issues.push_back({{"code", i.code}, {"message", i.message}});
  return json{{"valid", v.valid()}, {"issues", issues}}.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace jointgen
