#include "jointgen/stability.hpp"

#include <algorithm>
#include <cmath>

#include "jointgen/mechanics.hpp"
#include "jointgen/simulate.hpp"

namespace jointgen {

ForceCone intersect(ForceCone a, ForceCone b) {
  if (!a.valid) return a;
  if (!b.valid) return b;
  ForceCone out;
  out.lo = std::max(a.lo, b.lo);
  out.hi = std::min(a.hi, b.hi);
  out.valid = out.lo < out.hi;
  if (!out.valid) out.lo = out.hi = 0.0;
  return out;
}

namespace {

double tip_y(const JointDesign& d, const Config& q) {
  return apply_config(q, d.peg.tip).y;
}

// Golden-section refinement of min tip height over a branch tilt range.
double refine_theta(const JointDesign& d, const ThetaModel& model, double lo,
                    double hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double e = a + gr * (b - a);
  double fc = tip_y(d, model.at(c));
  double fe = tip_y(d, model.at(e));
  for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
    if (fc < fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - gr * (b - a);
      fc = tip_y(d, model.at(c));
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + gr * (b - a);
      fe = tip_y(d, model.at(e));
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Config seat_config(const JointDesign& scaled,
                   const std::vector<ContactMode>& sink_modes,
                   ContactMode* seat_mode_out) {
  Config best{{0.0, 0.0}, 0.0};
  double best_y = 1e300;
  ContactMode best_mode;
  for (const ContactMode& m : sink_modes) {
    if (m.empty()) continue;
    ModeSolution sol = solve_mode(scaled, m);
    for (const ModeBranch& b : sol.branches) {
      Config cand;
      switch (b.kind) {
        case ModeBranch::Kind::Isolated:
          cand = b.config;
          break;
        case ModeBranch::Kind::ThetaCurve: {
          double span = b.theta_hi - b.theta_lo;
          double coarse = b.theta_lo;
          double cy = 1e300;
          for (int k = 0; k <= 64; ++k) {
            double th = b.theta_lo + span * k / 64.0;
            double y = tip_y(scaled, b.model.at(th));
            if (y < cy) {
              cy = y;
              coarse = th;
            }
          }
          double window = span / 64.0;
          double th = refine_theta(scaled, b.model,
                                   std::max(b.theta_lo, coarse - window),
                                   std::min(b.theta_hi, coarse + window));
          cand = b.model.at(th);
          break;
        }
        case ModeBranch::Kind::Slide: {
          Config at_lo{b.slide_base + b.slide_dir * b.tau_lo, b.theta_fixed};
          Config at_hi{b.slide_base + b.slide_dir * b.tau_hi, b.theta_fixed};
          cand = tip_y(scaled, at_lo) <= tip_y(scaled, at_hi) ? at_lo : at_hi;
          break;
        }
        default: {
          if (b.reps.empty()) continue;
          cand = b.reps.front();
          double cy = 1e300;
          for (const Config& r : b.reps) {
            double y = tip_y(scaled, r);
            if (y < cy) {
              cy = y;
              cand = r;
            }
          }
          break;
        }
      }
      double y = tip_y(scaled, cand);
      if (y < best_y) {
        best_y = y;
        best = cand;
        best_mode = m;
      }
    }
  }
  if (seat_mode_out) *seat_mode_out = best_mode;
  return best;
}

namespace {

std::vector<Vec2> rotation_centers(const JointDesign& scaled,
                                   const std::vector<ContactMode>& sink_modes,
                                   const Config& seat,
                                   const ContactMode& seat_mode) {
  std::vector<Vec2> centers;
  auto push = [&](Vec2 c) {
    for (const Vec2& e : centers)
      if (norm(e - c) < 1e-9) return;
    centers.push_back(c);
  };
  for (const PairRef& pr : seat_mode)
    push(apply_config(seat, scaled.peg.points[pr.point]));
  // instantaneous centers of any 1-dof tilt family through the sink modes
  for (const ContactMode& m : sink_modes) {
    if (m.empty()) continue;
    ModeSolution sol = solve_mode(scaled, m);
    for (const ModeBranch& b : sol.branches) {
      if (b.kind != ModeBranch::Kind::ThetaCurve) continue;
      double th = std::clamp(seat.rotation, b.theta_lo, b.theta_hi);
      double h = std::min(1e-6, 0.5 * (b.theta_hi - b.theta_lo));
      if (h <= 0.0) continue;
      double t0 = std::max(b.theta_lo, th - h);
      double t1 = std::min(b.theta_hi, th + h);
      if (t1 - t0 < 1e-12) continue;
      Vec2 dT = (b.model.at(t1).translation - b.model.at(t0).translation) *
                (1.0 / (t1 - t0));
      Vec2 T = b.model.at(th).translation;
      // translation velocity under unit spin fixes the instantaneous center
      push({T.x - dT.y, T.y + dT.x});
    }
  }
  return centers;
}

}  // namespace

double goal_band(const JointDesign& scaled, double scale) {
  // Play allowance: a goal pair may separate up to the manufacturing
  // clearance before the peg counts as having left the goal state.
  return contact_tol(scaled) +
         std::abs(1.0 - scale) * 0.5 * scaled.socket.mouth_width();
}

bool in_goal_region(const JointDesign& scaled,
                    const std::vector<ContactMode>& goals, const Config& q,
                    double band) {
  for (const Vec2& p : scaled.peg.points)
    if (socket_clearance(apply_config(q, p), scaled.socket.vertices) <
        -kPenetrationTol)
      return false;
  for (const ContactMode& g : goals) {
    bool close = true;
    for (const PairRef& pr : g) {
      Vec2 w = apply_config(q, scaled.peg.points[pr.point]);
      SegmentContact c = point_segment_contact(w, scaled.socket.edge(pr.edge),
                                               contact_tol(scaled));
      if (std::abs(c.signed_distance) > band) {
        close = false;
        break;
      }
    }
    if (close) return true;
  }
  return false;
}

double max_rotation_for_sink(const JointDesign& scaled,
                             const std::vector<ContactMode>& sink_modes,
                             const Config& seat, double scale) {
  const double ctol = contact_tol(scaled);
  ContactMode seat_mode = classify_config(scaled, seat, ctol);
  if (seat_mode.empty()) return 0.0;

  auto goals = goal_modes_at(scaled);
  if (goals.empty()) return 0.0;
  const double band = goal_band(scaled, scale);

  auto centers = rotation_centers(scaled, sink_modes, seat, seat_mode);

  auto inside = [&](const Vec2& c, double ang) {
    Config q = seat;
    q.translation = rotate_about(seat.translation, c, ang);
    q.rotation = normalize_angle(seat.rotation + ang);
    return in_goal_region(scaled, goals, q, band);
  };

  const double coarse = 5e-4;
  double best = 0.0;
  for (const Vec2& c : centers) {
    for (double sgn : {1.0, -1.0}) {
      double lo = 0.0, hi = kPi;
      bool blocked = false;
      for (double a = coarse; a < kPi; a += coarse) {
        if (!inside(c, sgn * a)) {
          hi = a;
          blocked = true;
          break;
        }
        lo = a;
      }
      if (!blocked) {
        if (inside(c, sgn * kPi)) return kPi;
        hi = kPi;
      }
      for (int b = 0; b < 40; ++b) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (inside(c, sgn * mid) ? lo : hi) = mid;
      }
      best = std::max(best, lo);
    }
  }
  return best;
}

namespace {

bool holds_direction(const JointDesign& d, const Config& seat,
                     const ContactMode& seat_mode,
                     const std::vector<ContactMode>& capture, double phi,
                     const Metric& M, double mu) {
  Vec2 f{std::sin(phi), -std::cos(phi)};
  Vec3 w = applied_wrench(d, seat, f);
  auto rows = contact_rows(d, seat, seat_mode);
  const int k = static_cast<int>(rows.size());
  const double ptol = rest_power_tol(w, M);

  if (mu > 0.0) {
    auto gens = wrench_generators(d, seat, seat_mode, mu);
    if (best_motion(w, gens, {}, M).power <= ptol) return true;
  }

  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    ContactMode after;
    std::vector<Vec3> sep, keep;
    for (int b = 0; b < k; ++b) {
      if (mask & (1u << b))
        sep.push_back(rows[b]);
      else {
        keep.push_back(rows[b]);
        after.push_back(seat_mode[b]);
      }
    }
    if (mode_captured(capture, after)) continue;
    MotionResult mr = best_motion(w, sep, keep, M);
    if (mr.power <= ptol) continue;
    double un = norm(mr.u);
    bool strict = true;
    for (const Vec3& r : sep)
      if (dot(r, mr.u) <= 1e-8 * (1.0 + un)) strict = false;
    if (strict) return false;
  }
  return true;
}

}  // namespace

ForceCone force_cone_for_sink(const JointDesign& scaled,
                              const std::vector<ContactMode>& sink_modes,
                              const Config& seat, double mu) {
  ForceCone cone;
  const Metric M = peg_metric(scaled.peg);
  const double ctol = contact_tol(scaled);
  ContactMode seat_mode = classify_config(scaled, seat, ctol);
  if (seat_mode.empty()) return cone;

  auto holds = [&](double phi) {
    return holds_direction(scaled, seat, seat_mode, sink_modes, phi, M, mu);
  };
  if (!holds(0.0)) return cone;

  auto boundary = [&](double dir) {
    double held = 0.0;
    double lost = dir * kPi;
    const int steps = 180;
    bool found = false;
    for (int k = 1; k <= steps; ++k) {
      double phi = dir * kPi * k / steps;
      if (!holds(phi)) {
        lost = phi;
        found = true;
        break;
      }
      held = phi;
    }
    if (!found) return dir * kPi;
    for (int b = 0; b < 40; ++b) {
      double mid = 0.5 * (held + lost);
      if (mid == held || mid == lost) break;
      (holds(mid) ? held : lost) = mid;
    }
    return held;
  };

  cone.hi = boundary(+1.0);
  cone.lo = boundary(-1.0);
  cone.valid = true;
  return cone;
}

StabilitySummary stability_summary(const JointDesign& d, const ErrorModel& e,
                                   const GraphParams& p) {
  return stability_summary(d, e, p, insertion_report(d, e, p));
}

StabilitySummary stability_summary(const JointDesign& d, const ErrorModel& e,
                                   const GraphParams& p,
                                   const InsertionReport& report) {
  StabilitySummary out;
  bool first_cone = true;
  for (const ScaleReport& sr : report.scales) {
    JointDesign scaled = scale_design(d, sr.scale);
    // Escapes are judged against every goal state at this scale: a transition
    // from one goal sink into another does not count as coming loose.
    std::vector<ContactMode> capture;
    for (const SinkInfo& sink : sr.analysis.sinks)
      if (sink.goal)
        for (int id : sink.nodes) capture.push_back(sr.graph.modes[id]);
    for (const SinkInfo& sink : sr.analysis.sinks) {
      if (!sink.goal) continue;
      std::vector<ContactMode> sink_modes;
      for (int id : sink.nodes) sink_modes.push_back(sr.graph.modes[id]);
      SinkStability s;
      s.scale = sr.scale;
      s.scc = sink.scc;
      s.seat = seat_config(scaled, sink_modes, &s.seat_mode);
      if (s.seat_mode.empty()) continue;
      s.max_rotation =
          max_rotation_for_sink(scaled, sink_modes, s.seat, sr.scale);
      s.cone = force_cone_for_sink(scaled, capture, s.seat, p.mu);
      out.has_seat = true;
      out.max_rotation = std::max(out.max_rotation, s.max_rotation);
      out.cone = first_cone ? s.cone : intersect(out.cone, s.cone);
      first_cone = false;
      out.sinks.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace jointgen
