#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace jointgen {

// Contact classification tolerance shared by every geometric predicate,
// in design units.
inline constexpr double kGeomTol = 1e-9;
// Penetration depth a simulated trajectory is allowed to reach.
inline constexpr double kPenetrationTol = 1e-7;
inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline Vec2 perp_left(Vec2 v) { return {-v.y, v.x}; }

inline bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

inline Vec2 normalized(Vec2 v) {
  double n = norm(v);
  if (n <= 0.0) throw std::invalid_argument("cannot normalize zero vector");
  return {v.x / n, v.y / n};
}

inline Vec2 rotated(Vec2 v, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Wraps an angle into (-pi, pi].
double normalize_angle(double a);

// Planar rigid pose: p_world = R(rotation) * p + translation.
struct Config {
  Vec2 translation;
  double rotation = 0.0;

  bool operator==(const Config&) const = default;
};

Vec2 apply_config(const Config& q, Vec2 p);
Config compose(const Config& q1, const Config& q2);
Config inverse_config(const Config& q);
Vec2 rotate_about(Vec2 p, Vec2 center, double angle);

struct Segment {
  Vec2 a;
  Vec2 b;

  double length() const { return norm(b - a); }
  Vec2 direction() const { return normalized(b - a); }
  // Unit normal on the left of a->b; for socket edges traversed left
  // mouth lip to right this points into the free region.
  Vec2 normal_left() const { return perp_left(direction()); }
};

enum class SegmentHit { OnInterior, OnEndpoint, Off };

struct SegmentContact {
  SegmentHit kind = SegmentHit::Off;
  // Distance along normal_left(); positive on the free side.
  double signed_distance = 0.0;
  // Arc-length parameter of the closest point, clamped to [0, length].
  double param = 0.0;
};

// Classifies p against segment s. Throws on degenerate segments.
SegmentContact point_segment_contact(Vec2 p, const Segment& s,
                                     double tol = kGeomTol);

// Signed clearance of p against a socket profile polyline (vertices listed
// left mouth lip to right). Positive in the free region (hole interior or
// above the mouth), negative inside material; magnitude is the distance to
// the material boundary, which extends horizontally from both lips.
double socket_clearance(Vec2 p, std::span<const Vec2> profile);

}  // namespace jointgen
