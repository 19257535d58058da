#include "jointgen/geometry.hpp"

#include <algorithm>
#include <limits>

namespace jointgen {

double normalize_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

Vec2 apply_config(const Config& q, Vec2 p) {
  return rotated(p, q.rotation) + q.translation;
}

Config compose(const Config& q1, const Config& q2) {
  return {rotated(q2.translation, q1.rotation) + q1.translation,
          normalize_angle(q1.rotation + q2.rotation)};
}

Config inverse_config(const Config& q) {
  return {rotated(-q.translation, -q.rotation), normalize_angle(-q.rotation)};
}

Vec2 rotate_about(Vec2 p, Vec2 center, double angle) {
  return rotated(p - center, angle) + center;
}

SegmentContact point_segment_contact(Vec2 p, const Segment& s, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  Vec2 d = s.b - s.a;
  double len = norm(d);
  if (len <= kGeomTol) throw std::invalid_argument("degenerate segment");
  Vec2 dir = d * (1.0 / len);
  Vec2 rel = p - s.a;
  double along = dot(rel, dir);
  double across = cross(dir, rel);  // positive on the left of a->b

  SegmentContact out;
  out.signed_distance = across;
  out.param = std::clamp(along, 0.0, len);

  if (std::abs(across) <= tol && along >= -tol && along <= len + tol) {
    bool at_end = along <= tol || along >= len - tol;
    out.kind = at_end ? SegmentHit::OnEndpoint : SegmentHit::OnInterior;
    return out;
  }
  out.kind = SegmentHit::Off;
  if (along < 0.0 || along > len) {
    // Off the segment's span: keep the perpendicular sign but report the
    // true distance to the nearest endpoint.
    Vec2 nearest = along < 0.0 ? s.a : s.b;
    double dist = norm(p - nearest);
    out.signed_distance = across >= 0.0 ? dist : -dist;
  }
  return out;
}

namespace {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 d = b - a;
  double len2 = norm2(d);
  if (len2 <= 0.0) return norm(p - a);
  double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return norm(p - (a + d * t));
}

// Distance to the horizontal ray {(x, y0) : sign*(x - x0) >= 0}.
double point_hray_distance(Vec2 p, Vec2 origin, double sign) {
  double dx = sign * (p.x - origin.x);
  if (dx >= 0.0) return std::abs(p.y - origin.y);
  return norm(p - origin);
}

// Counts crossings of the upward vertical ray from p against segment a->b
// with the usual half-open rule so shared vertices count once.
bool upward_ray_crosses(Vec2 p, Vec2 a, Vec2 b) {
  if ((a.x > p.x) == (b.x > p.x)) return false;
  double t = (p.x - a.x) / (b.x - a.x);
  double y = a.y + t * (b.y - a.y);
  return y > p.y;
}

}  // namespace

double socket_clearance(Vec2 p, std::span<const Vec2> profile) {
  if (profile.size() < 2) throw std::invalid_argument("profile too short");
  const Vec2 left_lip = profile.front();
  const Vec2 right_lip = profile.back();

  double dist = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < profile.size(); ++i)
    dist = std::min(dist, point_segment_distance(p, profile[i], profile[i + 1]));
  dist = std::min(dist, point_hray_distance(p, left_lip, -1.0));
  dist = std::min(dist, point_hray_distance(p, right_lip, +1.0));

  // Material = below the lip rays minus the hole; odd crossing count of the
  // upward ray against the extended boundary means p is inside material.
  int crossings = 0;
  for (size_t i = 0; i + 1 < profile.size(); ++i)
    crossings += upward_ray_crosses(p, profile[i], profile[i + 1]) ? 1 : 0;
  if (p.x < left_lip.x && p.y < left_lip.y) ++crossings;
  if (p.x > right_lip.x && p.y < right_lip.y) ++crossings;

  return (crossings % 2 == 1) ? -dist : dist;
}

}  // namespace jointgen
