#pragma once

#include <vector>

#include "jointgen/contact.hpp"
#include "jointgen/design.hpp"
#include "jointgen/mechanics.hpp"

namespace jointgen {

struct SimParams {
  double step_frac = 0.01;  // of mouth width, per integration step
  double mu = 0.0;
  int max_steps = 6000;
  bool record = false;
};

enum class SimVerdict { Seated, Stuck, Ejected };

const char* verdict_name(SimVerdict v);

struct SimSample {
  Config q;
  ContactMode mode;
};

struct SimResult {
  SimVerdict verdict = SimVerdict::Stuck;
  Config final_config;
  ContactMode final_mode;
  int steps = 0;
  std::vector<SimSample> trajectory;
};

// Drops the peg from the start pose under the insertion force and follows
// the quasi-static motion until it rests or leaves the mouth.
SimResult simulate_insertion(const JointDesign& scaled, const Config& start,
                             const std::vector<ContactMode>& goal_modes,
                             const SimParams& p);

bool mode_captured(const std::vector<ContactMode>& capture,
                   const ContactMode& mode);

// Pushes the seated peg with a unit force at angle phi from the insertion
// axis; holds when the peg rests or keeps rattling inside the capture modes
// for one mouth width of travel.
bool disturbance_holds(const JointDesign& scaled, const Config& seat,
                       const std::vector<ContactMode>& capture, double phi,
                       const SimParams& p);

}  // namespace jointgen
