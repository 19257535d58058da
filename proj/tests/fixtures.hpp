#pragma once

#include <cmath>

#include "jointgen/design.hpp"

namespace jointgen::testfix {

// Symmetric V socket, two points resting on its walls at height -0.3.
inline JointDesign v_design() {
  JointDesign d;
  d.socket.vertices = {{-0.5, 0.0}, {0.0, -0.5}, {0.5, 0.0}};
  d.peg.points = {{-0.2, 0.0}, {0.2, 0.0}};
  d.peg.tip = {0.0, 0.5};
  d.peg.bump_radius = 0.03;
  d.correspondence.pairs = {{0, 0}, {1, 1}};
  return d;
}

// Trapezoid hole with a horizontal bottom edge carrying both contacts.
inline JointDesign flat_bottom_design() {
  JointDesign d;
  d.socket.vertices = {{-0.5, 0.0}, {-0.35, -0.6}, {0.35, -0.6}, {0.5, 0.0}};
  d.peg.points = {{-0.2, 0.0}, {0.2, 0.0}};
  d.peg.tip = {0.0, 0.5};
  d.peg.bump_radius = 0.03;
  d.correspondence.pairs = {{0, 1}, {1, 1}};
  return d;
}

// Rectangle socket: the two vertical walls are parallel, so invalid.
inline SocketDesign rect_socket() {
  SocketDesign s;
  s.vertices = {{-0.5, 0.0}, {-0.5, -0.6}, {0.5, -0.6}, {0.5, 0.0}};
  return s;
}

}  // namespace jointgen::testfix
