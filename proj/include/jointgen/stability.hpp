#pragma once

#include <vector>

#include "jointgen/contact.hpp"
#include "jointgen/design.hpp"
#include "jointgen/insertion_graph.hpp"

namespace jointgen {

// Half-open interval of force angles, measured from the insertion axis.
struct ForceCone {
  double lo = 0.0;
  double hi = 0.0;
  bool valid = false;

  double width() const { return valid ? hi - lo : 0.0; }
};

ForceCone intersect(ForceCone a, ForceCone b);

struct SinkStability {
  double scale = 1.0;
  int scc = -1;
  ContactMode seat_mode;
  Config seat;
  double max_rotation = 0.0;
  ForceCone cone;
};

struct StabilitySummary {
  bool has_seat = false;
  double max_rotation = 0.0;  // worst rattle over sinks and scales
  ForceCone cone;             // directions held at every sink and scale
  std::vector<SinkStability> sinks;
};

// Lowest-tip pose over the branches of the modes in one goal sink.
Config seat_config(const JointDesign& scaled,
                   const std::vector<ContactMode>& sink_modes,
                   ContactMode* seat_mode_out = nullptr);

// Separation a goal pair may develop before the peg counts as having left
// the goal state at this manufacturing scale.
double goal_band(const JointDesign& scaled, double scale);

// Penetration-free and every pair of some goal mode within the band.
bool in_goal_region(const JointDesign& scaled,
                    const std::vector<ContactMode>& goals, const Config& q,
                    double band);

// Largest pivot rotation from the seat, over rotation centers at the seat
// contacts and both directions, that stays in the goal region.
double max_rotation_for_sink(const JointDesign& scaled,
                             const std::vector<ContactMode>& sink_modes,
                             const Config& seat, double scale = 1.0);

// Force directions the seated peg resists without escaping the sink's
// capture modes; escape is any strictly separating motion with positive
// power into a mode outside the capture set.
ForceCone force_cone_for_sink(const JointDesign& scaled,
                              const std::vector<ContactMode>& sink_modes,
                              const Config& seat, double mu);

StabilitySummary stability_summary(const JointDesign& d, const ErrorModel& e,
                                   const GraphParams& p);

StabilitySummary stability_summary(const JointDesign& d, const ErrorModel& e,
                                   const GraphParams& p,
                                   const InsertionReport& report);

}  // namespace jointgen
