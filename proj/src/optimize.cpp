#include "jointgen/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "jointgen/seeds.hpp"

namespace jointgen {

namespace {

std::optional<Vec2> line_intersection(Vec2 p, Vec2 dp, Vec2 q, Vec2 dq) {
  double det = cross(dp, dq);
  if (std::abs(det) < 1e-12) return std::nullopt;
  double s = cross(q - p, dq) / det;
  return p + dp * s;
}

// Socket with edge j rotated by delta about its midpoint; the moved edge's
// endpoints re-intersect the neighbor edge lines, boundary ends the mouth
// line.
std::optional<SocketDesign> rotate_edge(const SocketDesign& s, int j,
                                        double delta) {
  const int m = s.edge_count();
  if (j < 0 || j >= m) return std::nullopt;
  Segment e = s.edge(j);
  Vec2 mid = (e.a + e.b) * 0.5;
  Vec2 dir = rotated(e.direction(), delta);
  double mouth_y = 0.5 * (s.vertices.front().y + s.vertices.back().y);

  SocketDesign out = s;
  if (j == 0) {
    auto v0 = line_intersection(mid, dir, {0.0, mouth_y}, {1.0, 0.0});
    if (!v0) return std::nullopt;
    out.vertices[0] = *v0;
  } else {
    Segment prev = s.edge(j - 1);
    auto vj = line_intersection(mid, dir, prev.a, prev.direction());
    if (!vj) return std::nullopt;
    out.vertices[j] = *vj;
  }
  if (j == m - 1) {
    auto vm = line_intersection(mid, dir, {0.0, mouth_y}, {1.0, 0.0});
    if (!vm) return std::nullopt;
    out.vertices[m] = *vm;
  } else {
    Segment next = s.edge(j + 1);
    auto vj1 = line_intersection(mid, dir, next.a, next.direction());
    if (!vj1) return std::nullopt;
    out.vertices[j + 1] = *vj1;
  }
  return out;
}

struct Objective {
  int undesired;
  int trapped;
  int trap_inflow;

  bool operator<(const Objective& o) const {
    if (undesired != o.undesired) return undesired < o.undesired;
    if (trapped != o.trapped) return trapped < o.trapped;
    return trap_inflow < o.trap_inflow;
  }
};

// Rotating an edge steers descent flows away from a jam before the jam
// itself disappears; in-edges of undesired sinks make that progress visible
// to the census.
int trap_inflow_of(const InsertionReport& r) {
  int inflow = 0;
  for (const ScaleReport& sr : r.scales) {
    std::vector<char> bad(sr.graph.modes.size(), 0);
    for (const SinkInfo& s : sr.analysis.sinks)
      if (!s.goal)
        for (int id : s.nodes) bad[id] = 1;
    for (size_t from = 0; from < sr.graph.out.size(); ++from)
      for (int to : sr.graph.out[from])
        if (bad[to] && !bad[from]) ++inflow;
  }
  return inflow;
}

Objective objective_of(const InsertionReport& r) {
  return {r.total_undesired, r.total_trapped, trap_inflow_of(r)};
}

}  // namespace

std::optional<RepairResult> edge_rotation_repair(const JointDesign& d,
                                                 const ErrorModel& e,
                                                 const OptimizerParams& p,
                                                 const InsertionReport& cur) {
  const Objective base = objective_of(cur);
  const double delta = p.edge_step_deg * kPi / 180.0;
  // Small moves rarely change the sink census, so escalate the magnitude;
  // within the first magnitude that improves anything, take the best move.
  for (int mag : {1, 2, 4, 8}) {
    std::optional<RepairResult> best;
    Objective best_obj = base;
    for (int j = 0; j < d.edge_count(); ++j) {
      for (double sign : {+1.0, -1.0}) {
        auto socket = rotate_edge(d.socket, j, sign * mag * delta);
        if (!socket) continue;
        JointDesign cand = d;
        cand.socket = *socket;
        if (!validate_design(cand).valid()) continue;
        InsertionReport rep = insertion_report(cand, e, p.graph);
        Objective obj = objective_of(rep);
        if (obj < best_obj) {
          best_obj = obj;
          best = RepairResult{std::move(cand), std::move(rep), j,
                              sign * mag * p.edge_step_deg};
        }
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

namespace {

// Rotation must not grow and the cone must not shrink; at least one of the
// two must strictly improve.
bool stability_better(const StabilitySummary& cand,
                      const StabilitySummary& cur) {
  if (!cand.has_seat) return false;
  if (!cur.has_seat) return true;
  if (cand.cone.width() < cur.cone.width() - 1e-12) return false;
  if (cand.max_rotation > cur.max_rotation + 1e-12) return false;
  return cand.max_rotation < cur.max_rotation - 1e-9 ||
         cand.cone.width() > cur.cone.width() + 1e-9;
}

bool seat_margins_ok(const JointDesign& d, const OptimizerParams& p) {
  auto goals = goal_modes_at(d);
  if (goals.empty()) return false;
  Config seat = seat_config(d, goals, nullptr);
  // Only pairs actually resting at the seat can slide off an edge end;
  // correspondence pairs the repair stage left unrealizable don't constrain.
  ContactMode seated = classify_config(d, seat, contact_tol(d));
  if (seated.empty()) return false;
  for (const PairRef& pr : seated) {
    Segment e = d.socket.edge(pr.edge);
    double margin = p.endpoint_margin_frac * e.length();
    Vec2 w = apply_config(seat, d.peg.points[pr.point]);
    SegmentContact c = point_segment_contact(w, e, contact_tol(d));
    if (c.kind == SegmentHit::Off) return false;
    if (c.param < margin || c.param > e.length() - margin) return false;
  }
  return true;
}

}  // namespace

std::optional<SlideResult> slide_points_step(const JointDesign& d,
                                             const ErrorModel& e,
                                             const OptimizerParams& p,
                                             const InsertionReport& cur_rep,
                                             const StabilitySummary& cur) {
  double shortest = 1e300;
  for (int j = 0; j < d.edge_count(); ++j)
    shortest = std::min(shortest, d.socket.edge(j).length());
  const double step = p.point_step_frac * shortest;
  if (!cur.has_seat) return std::nullopt;
  const double seat_theta =
      cur.sinks.empty() ? 0.0 : cur.sinks.front().seat.rotation;

  std::optional<SlideResult> best;
  for (const PairRef& pr : d.correspondence.pairs) {
    Vec2 edge_dir = d.socket.edge(pr.edge).direction();
    Vec2 peg_dir = rotated(edge_dir, -seat_theta);
    for (double sign : {+1.0, -1.0}) {
      JointDesign cand = d;
      cand.peg.points[pr.point] += peg_dir * (sign * step);
      if (!validate_design(cand).valid()) continue;
      if (!seat_margins_ok(cand, p)) continue;
      InsertionReport rep = insertion_report(cand, e, p.graph);
      if (!rep.insertable) continue;
      StabilitySummary st = stability_summary(cand, e, p.graph, rep);
      if (!stability_better(st, cur)) continue;
      if (!best || stability_better(st, best->stability))
        best = SlideResult{std::move(cand), std::move(rep), std::move(st)};
    }
  }
  (void)cur_rep;
  return best;
}

namespace {

StageSnapshot snapshot(const std::string& stage, const JointDesign& d,
                       const InsertionReport& rep,
                       const StabilitySummary& st) {
  StageSnapshot s;
  s.stage = stage;
  s.design = d;
  s.insertable = rep.insertable;
  s.undesired = rep.total_undesired;
  s.trapped = rep.total_trapped;
  s.max_rotation = st.max_rotation;
  s.cone = st.cone;
  return s;
}

}  // namespace

OptimizationTrace optimize(const JointDesign& d, const ErrorModel& e,
                           const OptimizerParams& p) {
  OptimizationTrace trace;
  JointDesign cur = d;
  InsertionReport rep = insertion_report(cur, e, p.graph);
  StabilitySummary st = stability_summary(cur, e, p.graph, rep);
  trace.stages.push_back(snapshot("initial", cur, rep, st));

  for (int it = 0; it < p.max_insertion_iters && !rep.insertable; ++it) {
    auto repaired = edge_rotation_repair(cur, e, p, rep);
    if (!repaired) {
      trace.failure = "no edge rotation improves insertion";
      break;
    }
    cur = std::move(repaired->design);
    rep = std::move(repaired->report);
  }
  st = stability_summary(cur, e, p.graph, rep);
  trace.stages.push_back(snapshot("insertion", cur, rep, st));
  if (!rep.insertable) {
    trace.success = false;
    if (trace.failure.empty())
      trace.failure = "insertion repair budget exhausted";
    trace.stages.push_back(snapshot("stability", cur, rep, st));
    return trace;
  }

  for (int it = 0; it < p.max_stability_iters; ++it) {
    auto slid = slide_points_step(cur, e, p, rep, st);
    if (!slid) break;
    cur = std::move(slid->design);
    rep = std::move(slid->report);
    st = std::move(slid->stability);
  }
  trace.stages.push_back(snapshot("stability", cur, rep, st));
  trace.success = rep.insertable;
  return trace;
}

std::vector<std::pair<int, int>> default_sweep_cells() {
  return {{4, 5}, {5, 5}, {5, 6}, {6, 6}};
}

std::vector<SweepCell> sweep_mn(const std::vector<std::pair<int, int>>& cells,
                                const ErrorModel& e, const OptimizerParams& p,
                                uint64_t seed) {
  std::vector<SweepCell> out;
  for (auto [n, m] : cells) {
    SweepCell cell;
    cell.points = n;
    cell.edges = m;
    cell.seed = seed;
    SeedParams sp;
    sp.points = n;
    sp.edges = m;
    sp.seed = seed;
    JointDesign d = make_seed_design(sp);
    cell.trace = optimize(d, e, p);
    out.push_back(std::move(cell));
  }
  return out;
}

}  // namespace jointgen
