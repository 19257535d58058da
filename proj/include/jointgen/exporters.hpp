#pragma once

#include <array>
#include <string>
#include <vector>

#include "jointgen/design.hpp"
#include "jointgen/insertion_graph.hpp"
#include "jointgen/simulate.hpp"
#include "jointgen/stability.hpp"

namespace jointgen {

// Socket edges as individual paths plus bump circles per contact point;
// poses beyond the first fade out; `before` overlays a second design in
// the blue/black scheme under the primary red/brown one.
std::string svg_design(const JointDesign& d, const std::vector<Config>& poses,
                       const ForceCone* cone = nullptr,
                       const std::vector<SimSample>* trajectory = nullptr,
                       const JointDesign* before = nullptr);

// Graphviz rendering: goal nodes doubled, undesired sink nodes filled,
// initial nodes bold.
std::string dot_graph(const InsertionGraph& g, const GraphAnalysis& a);

struct TriMesh {
  std::vector<std::array<double, 3>> verts;
  std::vector<std::array<int, 3>> tris;
};

// Solid of the peg outline: revolved about the insertion axis for
// separation 0, or the intersection of profile half-spaces instanced
// every `separation_deg` around the axis (90 -> square cross-section,
// 120 -> triangular).
TriMesh peg_mesh(const JointDesign& d, double separation_deg);

// Block with the hole profile cut in, same station rule as the peg.
TriMesh socket_mesh(const JointDesign& d, double separation_deg);

std::string obj_text(const TriMesh& m, const std::string& name);

}  // namespace jointgen
