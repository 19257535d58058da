#include "jointgen/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace jointgen {

const char* verdict_name(SimVerdict v) {
  switch (v) {
    case SimVerdict::Seated: return "seated";
    case SimVerdict::Stuck: return "stuck";
    default: return "ejected";
  }
}

bool mode_captured(const std::vector<ContactMode>& capture,
                   const ContactMode& mode) {
  for (const ContactMode& c : capture)
    if (!c.empty() && mode_subset(c, mode)) return true;
  return false;
}

namespace {

double min_point_y(const JointDesign& d, const Config& q) {
  double y = 1e300;
  for (const Vec2& p : d.peg.points) y = std::min(y, apply_config(q, p).y);
  return y;
}

struct StepOutcome {
  Config q;
  double advanced = 0.0;
};

// Friction widens only the equilibrium test; motion stays frictionless.
bool rests_here(const JointDesign& d, const Config& q, const ContactMode& mode,
                const std::vector<Vec3>& rows, const MotionResult& motion,
                Vec3 w, const Metric& M, double mu) {
  double tol = rest_power_tol(w, M);
  if (mu <= 0.0) return motion.power <= tol;
  auto gens = wrench_generators(d, q, mode, mu);
  for (size_t k = mode.size(); k < rows.size(); ++k) gens.push_back(rows[k]);
  return best_motion(w, gens, {}, M).power <= tol;
}

// One bisected integration step along u (unit metric speed) keeping the
// staying pairs on their lines; stops at the first contact event.  The
// classification must remain between staying (pairs kept) and mode (pairs
// allowed to separate); anything else is an event worth landing on exactly.
StepOutcome advance_step(const JointDesign& d, const Config& q, Vec3 u,
                         const ContactMode& mode, const ContactMode& staying,
                         const Metric& M, double step, double ctol) {
  auto place = [&](double s) {
    return project_to_mode(d, staying, screw_advance(q, u, s), M);
  };
  auto ok = [&](const Config& qq) {
    if (!config_feasible(d, staying, qq, kPenetrationTol)) return false;
    ContactMode m = classify_config(d, qq, ctol);
    return mode_subset(staying, m) && mode_subset(m, mode);
  };
  Config q1 = place(step);
  if (ok(q1)) return {q1, step};
  double lo = 0.0, hi = step;
  for (int b = 0; b < 50; ++b) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (ok(place(mid)) ? lo : hi) = mid;
  }
  return {place(hi), hi};
}

}  // namespace

SimResult simulate_insertion(const JointDesign& scaled, const Config& start,
                             const std::vector<ContactMode>& goal_modes,
                             const SimParams& p) {
  SimResult out;
  const Metric M = peg_metric(scaled.peg);
  const double ctol = contact_tol(scaled);
  const double step = p.step_frac * scaled.socket.mouth_width();

  Config q = start;
  int stall = 0;
  for (out.steps = 0; out.steps < p.max_steps; ++out.steps) {
    ContactMode mode = classify_config(scaled, q, ctol);
    if (p.record) out.trajectory.push_back({q, mode});

    Vec3 w = insertion_wrench(scaled, q);
    auto rows = support_rows(scaled, q, mode, ctol);
    MotionResult mr = best_motion(w, rows, {}, M);
    if (rests_here(scaled, q, mode, rows, mr, w, M, p.mu)) {
      out.final_config = q;
      out.final_mode = mode;
      out.verdict = mode_captured(goal_modes, mode) ? SimVerdict::Seated
                                                    : SimVerdict::Stuck;
      return out;
    }

    double speed = std::sqrt(std::max(M.quad(mr.u), 1e-300));
    Vec3 u = mr.u * (1.0 / speed);

    auto crows = contact_rows(scaled, q, mode);
    ContactMode staying;
    for (size_t k = 0; k < mode.size(); ++k)
      if (dot(crows[k], u) <= 1e-7) staying.push_back(mode[k]);

    StepOutcome so = advance_step(scaled, q, u, mode, staying, M, step, ctol);
    q = so.q;

    if (min_point_y(scaled, q) > 0.0 && u.y > 0.0) {
      out.final_config = q;
      out.final_mode = classify_config(scaled, q, ctol);
      out.verdict = SimVerdict::Ejected;
      return out;
    }

    stall = so.advanced < 1e-9 * step ? stall + 1 : 0;
    if (stall > 25) break;
  }
  out.final_config = q;
  out.final_mode = classify_config(scaled, q, ctol);
  out.verdict = mode_captured(goal_modes, out.final_mode) ? SimVerdict::Seated
                                                          : SimVerdict::Stuck;
  return out;
}

bool disturbance_holds(const JointDesign& scaled, const Config& seat,
                       const std::vector<ContactMode>& capture, double phi,
                       const SimParams& p) {
  const Metric M = peg_metric(scaled.peg);
  const double ctol = contact_tol(scaled);
  const double step = p.step_frac * scaled.socket.mouth_width();
  const double budget = scaled.socket.mouth_width();
  const Vec2 f{std::sin(phi), -std::cos(phi)};

  Config q = seat;
  double traveled = 0.0;
  int stall = 0;
  for (int it = 0; it < p.max_steps && traveled < budget; ++it) {
    ContactMode mode = classify_config(scaled, q, ctol);
    if (!mode_captured(capture, mode)) return false;

    Vec3 w = applied_wrench(scaled, q, f);
    auto rows = support_rows(scaled, q, mode, ctol);
    MotionResult mr = best_motion(w, rows, {}, M);
    if (rests_here(scaled, q, mode, rows, mr, w, M, p.mu)) return true;

    double speed = std::sqrt(std::max(M.quad(mr.u), 1e-300));
    Vec3 u = mr.u * (1.0 / speed);
    auto crows = contact_rows(scaled, q, mode);
    ContactMode staying;
    for (size_t k = 0; k < mode.size(); ++k)
      if (dot(crows[k], u) <= 1e-7) staying.push_back(mode[k]);

    StepOutcome so = advance_step(scaled, q, u, mode, staying, M, step, ctol);
    q = so.q;
    traveled += so.advanced;

    if (min_point_y(scaled, q) > 0.0 && u.y > 0.0) return false;
    stall = so.advanced < 1e-9 * step ? stall + 1 : 0;
    if (stall > 25) return true;  // wedged in place: it holds
  }
  return true;
}

}  // namespace jointgen
