#pragma once

#include <map>
#include <vector>

#include "jointgen/contact.hpp"
#include "jointgen/design.hpp"
#include "jointgen/mechanics.hpp"

namespace jointgen {

struct GraphParams {
  double mu = 0.0;
  int entry_grid = 5;
  double micro_step_frac = 0.05;  // of mouth width, per probe step
  int max_micro_steps = 120;      // per representative probe
  int max_nodes = 2000;
};

// Directed transition graph over contact modes for one socket scale.
struct InsertionGraph {
  std::vector<ContactMode> modes;
  std::map<ContactMode, int> index;
  std::vector<std::vector<int>> out;
  std::vector<char> rest;  // node has a resting representative
  std::vector<int> goal_nodes;
  std::vector<int> initial_nodes;
  int empty_node = -1;

  int node_id(const ContactMode& m) const;
};

struct SinkInfo {
  int scc = -1;
  std::vector<int> nodes;
  bool goal = false;
};

struct GraphAnalysis {
  std::vector<int> scc_of;
  int scc_count = 0;
  std::vector<SinkInfo> sinks;
  int undesired_sinks = 0;
  std::vector<int> trapped_initials;  // initial nodes missing every goal sink
  bool insertable = false;
};

struct ScaleReport {
  double scale = 1.0;
  std::vector<ContactMode> goal_modes;
  InsertionGraph graph;
  GraphAnalysis analysis;
};

struct InsertionReport {
  std::vector<ScaleReport> scales;
  bool insertable = false;
  int total_undesired = 0;
  int total_trapped = 0;
};

// Maximal realizable subsets of the correspondence for this (already
// scaled) design.
std::vector<ContactMode> goal_modes_at(const JointDesign& scaled);

InsertionGraph build_graph(const JointDesign& scaled, const ErrorModel& e,
                           const GraphParams& p);

GraphAnalysis analyze_graph(const InsertionGraph& g);

// Builds and analyzes the graph at every scale extreme.
InsertionReport insertion_report(const JointDesign& d, const ErrorModel& e,
                                 const GraphParams& p);

}  // namespace jointgen
