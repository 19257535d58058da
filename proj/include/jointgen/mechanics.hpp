#pragma once

#include <span>
#include <vector>

#include "jointgen/contact.hpp"
#include "jointgen/design.hpp"
#include "jointgen/geometry.hpp"

namespace jointgen {

// Planar twist (vx, vy, omega) and wrench (fx, fy, tau) about a common
// reference point.
struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// Kinetic metric diag(1, 1, rho2); rho2 is the mean squared contact-point
// distance from the peg origin, making translation and rotation commensurate.
struct Metric {
  double rho2 = 1.0;

  Vec3 mul(Vec3 u) const { return {u.x, u.y, u.z * rho2}; }
  Vec3 solve(Vec3 w) const { return {w.x, w.y, w.z / rho2}; }
  double quad(Vec3 u) const { return dot(u, mul(u)); }
};

Metric peg_metric(const PegDesign& peg);

// Wrench of a force applied at the peg tip, moments taken about the peg
// origin's world position.
Vec3 applied_wrench(const JointDesign& d, const Config& q, Vec2 force);
Vec3 insertion_wrench(const JointDesign& d, const Config& q);

// One row per pair: separation rate of the contact under a twist.
std::vector<Vec3> contact_rows(const JointDesign& d, const Config& q,
                               const ContactMode& mode);

// Contact rows plus slab-top rows for peg points on the lip rays outside
// the mouth.
std::vector<Vec3> support_rows(const JointDesign& d, const Config& q,
                               const ContactMode& mode, double tol);

// Force-cone generator rows for the equilibrium test; with mu > 0 each
// contact contributes the two friction cone edges instead of its normal.
std::vector<Vec3> wrench_generators(const JointDesign& d, const Config& q,
                                    const ContactMode& mode, double mu);

struct MotionResult {
  Vec3 u;
  double power = 0.0;      // dot(w, u) at the optimum
  double objective = 0.0;  // dot(w, u) - quad(u)/2
};

// Maximizes dot(w, u) - 0.5 * u' M u over {ineq . u >= 0, eq . u = 0}.
// Exact for this dimension: active sets are enumerated directly.
MotionResult best_motion(Vec3 w, std::span<const Vec3> ineq,
                         std::span<const Vec3> eq, const Metric& M);

// Power below which a pose counts as resting, relative to free fall.
double rest_power_tol(Vec3 w, const Metric& M);

// Relative band above the rest tolerance treated as marginal: the pose rests
// but escape is close enough that transitions are still recorded.
inline constexpr double kMarginalBand = 1e3;

bool resting(const JointDesign& d, const Config& q, const ContactMode& mode,
             const Metric& M, double mu);

// Minimal-change Newton projection of a pose onto the mode's point-on-line
// constraints; keeps drift from discrete steps bounded.
Config project_to_mode(const JointDesign& d, const ContactMode& mode,
                       Config q, const Metric& M, int iters = 6);

// Exact screw displacement: rotation by u.z * s about the instantaneous
// center implied by the twist, translation for u.z == 0.
Config screw_advance(const Config& q, Vec3 u, double s);

}  // namespace jointgen
