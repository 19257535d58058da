#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "jointgen/design.hpp"
#include "jointgen/geometry.hpp"

namespace jointgen {

// A contact mode is a sorted, duplicate-free set of point/edge pairs.
using ContactMode = std::vector<PairRef>;

ContactMode normalize_mode(ContactMode m);
ContactMode mode_with(const ContactMode& m, PairRef p);
ContactMode mode_without(const ContactMode& m, PairRef p);
bool mode_contains(const ContactMode& m, PairRef p);
bool mode_subset(const ContactMode& sub, const ContactMode& sup);
std::string mode_name(const ContactMode& m);

// Classification tolerance scales with the socket mouth.
double contact_tol(const JointDesign& d);

// Pairs whose point lies on its edge segment at the given pose.
ContactMode classify_config(const JointDesign& d, const Config& q,
                            double tol);

// Translation as a closed-form function of tilt for a rank-2 pair set.
struct ThetaModel {
  Vec2 t0, t1, t2;
  Config at(double theta) const {
    return {t0 + t1 * std::cos(theta) + t2 * std::sin(theta), theta};
  }
};

// One connected component of a mode's configuration set.
struct ModeBranch {
  enum class Kind { Isolated, ThetaCurve, Slide, PivotSlide, Free };
  Kind kind = Kind::Isolated;
  int dof = 0;

  // Isolated: the single pose.
  Config config;

  // ThetaCurve / PivotSlide: feasible tilt range.
  double theta_lo = 0.0;
  double theta_hi = 0.0;

  // ThetaCurve: pose along the curve.
  ThetaModel model;

  // Slide: fixed tilt, translation = slide_base + tau * slide_dir.
  double theta_fixed = 0.0;
  Vec2 slide_base;
  Vec2 slide_dir;
  double tau_lo = 0.0;
  double tau_hi = 0.0;

  // Sampled poses used to seed motion probes (17 per free branch).
  std::vector<Config> reps;

  double theta_min() const;
  double theta_max() const;
};

struct ModeSolution {
  int dof = -1;
  std::vector<ModeBranch> branches;

  bool realizable() const { return !branches.empty(); }
};

// Number of representative poses sampled per branch with dof >= 1.
inline constexpr int kBranchReps = 17;

// Tilt samples used when scanning feasible ranges on the circle.
inline constexpr int kThetaScan = 721;

// All poses satisfying the mode's point-on-edge constraints that keep every
// contact point on its segment and every peg point out of the material.
ModeSolution solve_mode(const JointDesign& d, const ContactMode& mode);

// Pose-feasibility predicate shared by the solver and its callers: contact
// points on their segments, no peg point inside material.
bool config_feasible(const JointDesign& d, const ContactMode& mode,
                     const Config& q, double tol);

}  // namespace jointgen
