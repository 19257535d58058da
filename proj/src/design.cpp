#include "jointgen/design.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace jointgen {

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.code == code; });
}

namespace {

void add(ValidationReport& r, std::string code, std::string message) {
  r.issues.push_back({std::move(code), std::move(message)});
}

int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  double v = cross(b - a, c - a);
  if (v > kGeomTol) return 1;
  if (v < -kGeomTol) return -1;
  return 0;
}

bool on_span(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x, b.x) - kGeomTol <= p.x &&
         p.x <= std::max(a.x, b.x) + kGeomTol &&
         std::min(a.y, b.y) - kGeomTol <= p.y &&
         p.y <= std::max(a.y, b.y) + kGeomTol;
}

bool segments_touch(const Vec2& a, const Vec2& b, const Vec2& c,
                    const Vec2& d) {
  int o1 = orient(a, b, c);
  int o2 = orient(a, b, d);
  int o3 = orient(c, d, a);
  int o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_span(a, b, c)) return true;
  if (o2 == 0 && on_span(a, b, d)) return true;
  if (o3 == 0 && on_span(c, d, a)) return true;
  if (o4 == 0 && on_span(c, d, b)) return true;
  return false;
}

double signed_area_closed(const std::vector<Vec2>& v) {
  double s = 0.0;
  for (size_t k = 0; k < v.size(); ++k) {
    const Vec2& p = v[k];
    const Vec2& q = v[(k + 1) % v.size()];
    s += cross(p, q);
  }
  return 0.5 * s;
}

}  // namespace

ValidationReport validate_design(const JointDesign& d) {
  ValidationReport r;
  const int n = d.point_count();
  const int m = d.edge_count();

  if (n < 2 || n > 6)
    add(r, "peg_point_count",
        "peg needs 2..6 contact points, got " + std::to_string(n));
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k)
      if (norm(d.peg.points[i] - d.peg.points[k]) <= kGeomTol)
        add(r, "peg_points_coincident",
            "peg points " + std::to_string(i) + " and " + std::to_string(k) +
                " coincide");
  if (n >= 3) {
    bool collinear = true;
    for (int i = 2; i < n && collinear; ++i)
      if (orient(d.peg.points[0], d.peg.points[1], d.peg.points[i]) != 0)
        collinear = false;
    if (collinear) add(r, "peg_points_collinear", "peg points are collinear");
  }

  const auto& v = d.socket.vertices;
  if (m < 2 || m > 7)
    add(r, "socket_edge_count",
        "socket needs 2..7 edges, got " + std::to_string(m));
  if (static_cast<int>(v.size()) >= 2) {
    for (int j = 0; j + 1 < static_cast<int>(v.size()); ++j)
      if (norm(v[j + 1] - v[j]) <= kGeomTol)
        add(r, "socket_edge_degenerate",
            "socket edge " + std::to_string(j) + " has zero length");

    if (!(v.back().x - v.front().x > kGeomTol))
      add(r, "socket_mouth_width",
          "mouth must have positive width left to right");
    if (std::abs(v.back().y - v.front().y) > 1e-7)
      add(r, "socket_lips_uneven", "mouth lips are not level");
    double mouth_y = 0.5 * (v.front().y + v.back().y);
    for (int j = 1; j + 1 < static_cast<int>(v.size()); ++j)
      if (!(v[j].y < mouth_y - kGeomTol))
        add(r, "socket_vertex_above_mouth",
            "interior vertex " + std::to_string(j) +
                " is not below the mouth line");

    if (!r.has("socket_edge_degenerate")) {
      const double sin_tol = std::sin(kParallelTolDeg * kPi / 180.0);
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
          Vec2 ua = d.socket.edge(a).direction();
          Vec2 ub = d.socket.edge(b).direction();
          if (std::abs(cross(ua, ub)) < sin_tol)
            add(r, "socket_edges_parallel",
                "edges " + std::to_string(a) + " and " + std::to_string(b) +
                    " are parallel within " + std::to_string(kParallelTolDeg) +
                    " deg");
        }
    }

    for (int a = 0; a < m; ++a)
      for (int b = a + 2; b < m; ++b) {
        if (segments_touch(v[a], v[a + 1], v[b], v[b + 1]))
          add(r, "socket_self_intersection",
              "edges " + std::to_string(a) + " and " + std::to_string(b) +
                  " intersect");
      }

    if (!r.has("socket_self_intersection") && !r.has("socket_mouth_width") &&
        signed_area_closed(v) <= 0.0)
      add(r, "socket_winding",
          "hole polygon must wind counterclockwise; reorder the profile "
          "left lip to right lip");
  }

  if (std::abs(n - m) > 1)
    add(r, "count_mismatch",
        "|points - edges| must be <= 1, got n=" + std::to_string(n) +
            " m=" + std::to_string(m));

  std::set<int> used_points;
  for (const PairRef& p : d.correspondence.pairs) {
    if (p.point < 0 || p.point >= n)
      add(r, "pair_point_range",
          "correspondence point index " + std::to_string(p.point) +
              " out of range");
    if (p.edge < 0 || p.edge >= m)
      add(r, "pair_edge_range",
          "correspondence edge index " + std::to_string(p.edge) +
              " out of range");
    if (!used_points.insert(p.point).second)
      add(r, "pair_point_reused",
          "peg point " + std::to_string(p.point) +
              " appears in more than one pair");
  }

  // Equal point spacing and edge length makes one-pair adjacency ambiguous.
  if (!r.has("pair_point_range") && !r.has("pair_edge_range")) {
    for (size_t a = 0; a < d.correspondence.pairs.size(); ++a)
      for (size_t b = a + 1; b < d.correspondence.pairs.size(); ++b) {
        int pa = d.correspondence.pairs[a].point;
        int pb = d.correspondence.pairs[b].point;
        double dist = norm(d.peg.points[pa] - d.peg.points[pb]);
        for (int j = 0; j < m; ++j)
          if (std::abs(dist - d.socket.edge(j).length()) < 1e-9)
            add(r, "degenerate_spacing",
                "distance between peg points " + std::to_string(pa) + " and " +
                    std::to_string(pb) + " equals the length of edge " +
                    std::to_string(j));
      }
  }

  return r;
}

SocketDesign scale_socket(const SocketDesign& s, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be > 0");
  SocketDesign out = s;
  Vec2 c = s.mouth_center();
  for (Vec2& p : out.vertices) p = c + (p - c) * factor;
  return out;
}

JointDesign scale_design(const JointDesign& d, double factor) {
  JointDesign out = d;
  out.socket = scale_socket(d.socket, factor);
  return out;
}

JointDesign canonicalize(const JointDesign& d) {
  JointDesign out = d;

  if (out.socket.vertices.size() >= 2) {
    Vec2 mouth = out.socket.vertices.back() - out.socket.vertices.front();
    double tilt = std::atan2(mouth.y, mouth.x);
    Vec2 center = out.socket.mouth_center();
    if (std::abs(tilt) + std::abs(center.x) + std::abs(center.y) > 1e-12) {
      for (Vec2& p : out.socket.vertices)
        p = rotated(p - center, -tilt);
    }
    out.socket.insertion_axis = {0.0, -1.0};
  }

  if (!out.peg.points.empty()) {
    Vec2 centroid{0.0, 0.0};
    for (const Vec2& p : out.peg.points) centroid += p;
    centroid = centroid * (1.0 / static_cast<double>(out.peg.points.size()));
    // skip sub-ulp residue so canonical(canonical(d)) == canonical(d)
    if (std::abs(centroid.x) + std::abs(centroid.y) > 1e-12) {
      for (Vec2& p : out.peg.points) p -= centroid;
      out.peg.tip -= centroid;
    }
  }

  return out;
}

double entry_height(const JointDesign& d, double dx, double theta) {
  double min_y = 0.0;
  bool first = true;
  for (const Vec2& p : d.peg.points) {
    double y = rotated(p, theta).y;
    if (first || y < min_y) {
      min_y = y;
      first = false;
    }
  }
  (void)dx;
  double margin = 0.01 * d.socket.mouth_width();
  return margin - min_y;
}

std::vector<Config> entry_poses(const JointDesign& d, const ErrorModel& e,
                                int grid) {
  if (grid < 1) grid = 1;
  std::vector<Config> out;
  out.reserve(static_cast<size_t>(grid) * grid);
  for (int a = 0; a < grid; ++a)
    for (int b = 0; b < grid; ++b) {
      double fx = grid == 1 ? 0.0 : -1.0 + 2.0 * a / (grid - 1);
      double ft = grid == 1 ? 0.0 : -1.0 + 2.0 * b / (grid - 1);
      double dx = fx * e.dx;
      double th = ft * e.dtheta;
      out.push_back({{dx, entry_height(d, dx, th)}, th});
    }
  return out;
}

}  // namespace jointgen
