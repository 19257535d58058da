#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jointgen/design.hpp"
#include "jointgen/insertion_graph.hpp"
#include "jointgen/stability.hpp"

namespace jointgen {

struct OptimizerParams {
  double edge_step_deg = 0.5;
  double point_step_frac = 0.01;      // of the shortest socket edge
  double endpoint_margin_frac = 0.02; // seat contacts keep this off edge ends
  int max_insertion_iters = 12;
  int max_stability_iters = 12;
  GraphParams graph;
};

struct StageSnapshot {
  std::string stage;  // "initial", "insertion", "stability"
  JointDesign design;
  bool insertable = false;
  int undesired = 0;
  int trapped = 0;
  double max_rotation = 0.0;
  ForceCone cone;
};

struct OptimizationTrace {
  std::vector<StageSnapshot> stages;
  bool success = false;
  std::string failure;
};

struct RepairResult {
  JointDesign design;
  InsertionReport report;
  int edge = -1;
  double step_deg = 0.0;
};

// Rotates one socket edge about its midpoint, re-intersecting neighbors;
// returns the first candidate that strictly reduces
// (undesired sinks, trapped entries). nullopt when no rotation helps.
std::optional<RepairResult> edge_rotation_repair(const JointDesign& d,
                                                 const ErrorModel& e,
                                                 const OptimizerParams& p,
                                                 const InsertionReport& cur);

struct SlideResult {
  JointDesign design;
  InsertionReport report;
  StabilitySummary stability;
};

// Slides one peg contact point along its seated edge; returns the best
// candidate improving (max_rotation down, cone width up) while staying
// insertable. nullopt when no slide improves.
std::optional<SlideResult> slide_points_step(const JointDesign& d,
                                             const ErrorModel& e,
                                             const OptimizerParams& p,
                                             const InsertionReport& cur_rep,
                                             const StabilitySummary& cur);

// Insertion repair until insertable, then stability improvement; snapshots
// the design after each stage.
OptimizationTrace optimize(const JointDesign& d, const ErrorModel& e,
                           const OptimizerParams& p);

struct SweepCell {
  int points = 0;
  int edges = 0;
  uint64_t seed = 0;
  OptimizationTrace trace;
};

std::vector<SweepCell> sweep_mn(const std::vector<std::pair<int, int>>& cells,
                                const ErrorModel& e, const OptimizerParams& p,
                                uint64_t seed);

std::vector<std::pair<int, int>> default_sweep_cells();

}  // namespace jointgen
