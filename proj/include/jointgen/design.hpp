#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jointgen/geometry.hpp"

namespace jointgen {

// Ordered contact points c_1..c_n in the peg frame plus the force
// application point. The bump radius is render/export data only.
struct PegDesign {
  std::vector<Vec2> points;
  double bump_radius = 0.05;
  Vec2 tip;
};

// Hole profile polyline, vertices listed left mouth lip to right mouth lip;
// edge j runs vertices[j] -> vertices[j+1].
struct SocketDesign {
  std::vector<Vec2> vertices;
  Vec2 insertion_axis{0.0, -1.0};

  int edge_count() const { return static_cast<int>(vertices.size()) - 1; }
  Segment edge(int j) const { return {vertices[j], vertices[j + 1]}; }
  double mouth_width() const { return norm(vertices.back() - vertices.front()); }
  Vec2 mouth_center() const {
    return (vertices.front() + vertices.back()) * 0.5;
  }
};

struct PairRef {
  int point = 0;
  int edge = 0;

  auto operator<=>(const PairRef&) const = default;
};

// Intended point/edge contacts when fully inserted.
struct Correspondence {
  std::vector<PairRef> pairs;
};

// Bounds on the initial pose error and the uniform manufacturing scale.
struct ErrorModel {
  double dx = 0.0;
  double dtheta = 0.0;
  double scale = 0.0;

  // The three socket scales every analysis sweeps.
  std::vector<double> scale_extremes() const {
    if (scale <= 0.0) return {1.0};
    return {1.0 - scale, 1.0, 1.0 + scale};
  }
};

struct JointDesign {
  PegDesign peg;
  SocketDesign socket;
  Correspondence correspondence;

  int point_count() const { return static_cast<int>(peg.points.size()); }
  int edge_count() const { return socket.edge_count(); }
};

struct ValidationIssue {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool valid() const { return issues.empty(); }
  bool has(const std::string& code) const;
};

// Angular threshold below which two edges count as parallel (degrees).
inline constexpr double kParallelTolDeg = 0.5;

ValidationReport validate_design(const JointDesign& d);

// Uniform socket scaling about the mouth center; the insertion axis and the
// peg are untouched.
SocketDesign scale_socket(const SocketDesign& s, double factor);
JointDesign scale_design(const JointDesign& d, double factor);

// Canonical frame: mouth center at the origin, insertion axis (0,-1), peg
// frame origin at the centroid of the contact points.
JointDesign canonicalize(const JointDesign& d);

// Entry pose grid spanning the error box at the mouth (straight-drop start
// poses used by graph construction and the simulator). Odd grid counts keep
// the centered pose in the set.
std::vector<Config> entry_poses(const JointDesign& d, const ErrorModel& e,
                                int grid = 5);

// The height at which a peg at tilt theta clears the mouth line.
double entry_height(const JointDesign& d, double dx, double theta);

}  // namespace jointgen
