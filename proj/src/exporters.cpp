#include "jointgen/exporters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "jointgen/contact.hpp"
#include "jointgen/geometry.hpp"

namespace jointgen {

namespace {

constexpr int kAzimuth = 60;  // divisible by the 3- and 4-fold station counts

std::string num(double v, const char* spec = "%.6f") {
  char buf[64];
  if (std::abs(v) < 5e-13) v = 0.0;  // avoid -0.000000
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) {
                          return std::abs(a.x - b.x) < 1e-12 &&
                                 std::abs(a.y - b.y) < 1e-12;
                        }),
            pts.end());
  if (pts.size() < 3) return pts;
  auto cross3 = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross3(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross3(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);  // CCW, last == first dropped
  return h;
}

struct Box {
  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
  void add(const Vec2& p) {
    minx = std::min(minx, p.x);
    miny = std::min(miny, p.y);
    maxx = std::max(maxx, p.x);
    maxy = std::max(maxy, p.y);
  }
};

}  // namespace

std::string svg_design(const JointDesign& d, const std::vector<Config>& poses,
                       const ForceCone* cone,
                       const std::vector<SimSample>* trajectory,
                       const JointDesign* before) {
  const double w = d.socket.mouth_width();
  Box box;
  for (const Vec2& v : d.socket.vertices) box.add(v);
  if (before)
    for (const Vec2& v : before->socket.vertices) box.add(v);
  box.add({d.socket.vertices.front().x + 0.4 * w, 0.0});
  box.add({d.socket.vertices.back().x - 0.4 * w, 0.0});
  std::vector<std::vector<Vec2>> hulls;
  for (const Config& q : poses) {
    std::vector<Vec2> pts;
    for (const Vec2& c : d.peg.points) pts.push_back(apply_config(q, c));
    pts.push_back(apply_config(q, d.peg.tip));
    for (const Vec2& p : pts) box.add(p);
    hulls.push_back(convex_hull(pts));
  }
  if (trajectory)
    for (const SimSample& s : *trajectory) box.add(s.q.translation);
  const double pad = 0.12 * std::max(box.maxx - box.minx, box.maxy - box.miny);
  box.minx -= pad;
  box.miny -= pad;
  box.maxx += pad;
  box.maxy += pad;
  const double scale = 640.0 / std::max(box.maxx - box.minx, box.maxy - box.miny);
  auto X = [&](double x) { return num((x - box.minx) * scale); };
  auto Y = [&](double y) { return num((box.maxy - y) * scale); };
  auto edge_path = [&](std::ostringstream& o, const Vec2& a, const Vec2& b,
                       const char* color) {
    o << "<path stroke=\"" << color
      << "\" stroke-width=\"2\" fill=\"none\" d=\"M " << X(a.x) << ' '
      << Y(a.y) << " L " << X(b.x) << ' ' << Y(b.y) << "\"/>\n";
  };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
    << num((box.maxx - box.minx) * scale) << "\" height=\""
    << num((box.maxy - box.miny) * scale) << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  if (before) {
    for (int j = 0; j < before->socket.edge_count(); ++j) {
      const Segment e = before->socket.edge(j);
      edge_path(o, e.a, e.b, "#000000");
    }
    const Config q0 = poses.empty() ? Config{} : poses.front();
    for (const Vec2& c : before->peg.points) {
      const Vec2 p = apply_config(q0, c);
      o << "<circle fill=\"#1f5fd0\" cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y)
        << "\" r=\"" << num(std::max(before->peg.bump_radius * scale, 1.5))
        << "\"/>\n";
    }
  }

  for (int j = 0; j < d.socket.edge_count(); ++j) {
    const Segment e = d.socket.edge(j);
    edge_path(o, e.a, e.b, "#6b4226");
  }
  const Vec2 ll = d.socket.vertices.front();
  const Vec2 rl = d.socket.vertices.back();
  o << "<line stroke=\"#6b4226\" stroke-width=\"2\" x1=\"" << X(ll.x)
    << "\" y1=\"" << Y(ll.y) << "\" x2=\"" << X(ll.x + 0.4 * w) << "\" y2=\""
    << Y(ll.y) << "\"/>\n";
  o << "<line stroke=\"#6b4226\" stroke-width=\"2\" x1=\"" << X(rl.x)
    << "\" y1=\"" << Y(rl.y) << "\" x2=\"" << X(rl.x - 0.4 * w) << "\" y2=\""
    << Y(rl.y) << "\"/>\n";

  if (trajectory && trajectory->size() > 1) {
    o << "<polyline fill=\"none\" stroke=\"#9467bd\" stroke-width=\"1\" "
         "stroke-dasharray=\"4,3\" points=\"";
    for (std::size_t i = 0; i < trajectory->size(); ++i) {
      if (i) o << ' ';
      const Vec2 t = (*trajectory)[i].q.translation;
      o << X(t.x) << ',' << Y(t.y);
    }
    o << "\"/>\n";
  }

  for (std::size_t pi = 0; pi < poses.size(); ++pi) {
    const char* color = "#d0342c";
    const double op = pi == 0 ? 0.30 : 0.15;
    if (hulls[pi].size() >= 3) {
      o << "<polygon fill=\"" << color << "\" fill-opacity=\""
        << num(op, "%.2f") << "\" stroke=\"" << color
        << "\" stroke-width=\"1\" points=\"";
      for (std::size_t i = 0; i < hulls[pi].size(); ++i) {
        if (i) o << ' ';
        o << X(hulls[pi][i].x) << ',' << Y(hulls[pi][i].y);
      }
      o << "\"/>\n";
    }
    for (const Vec2& c : d.peg.points) {
      const Vec2 p = apply_config(poses[pi], c);
      o << "<circle fill=\"" << color << "\" cx=\"" << X(p.x) << "\" cy=\""
        << Y(p.y) << "\" r=\"" << num(std::max(d.peg.bump_radius * scale, 1.5))
        << "\"/>\n";
    }
    const Vec2 tp = apply_config(poses[pi], d.peg.tip);
    o << "<rect fill=\"" << color << "\" x=\"" << num(std::stod(X(tp.x)) - 2.0)
      << "\" y=\"" << num(std::stod(Y(tp.y)) - 2.0)
      << "\" width=\"4\" height=\"4\"/>\n";
  }

  if (cone && cone->valid && !poses.empty()) {
    const Vec2 tp = apply_config(poses.front(), d.peg.tip);
    const double len = 0.8 * w;
    o << "<path fill=\"#2e8b57\" fill-opacity=\"0.20\" stroke=\"#2e8b57\" "
         "stroke-width=\"1\" d=\"M " << X(tp.x) << ' ' << Y(tp.y);
    const int steps = 16;
    for (int i = 0; i <= steps; ++i) {
      const double phi = cone->lo + (cone->hi - cone->lo) * i / steps;
      const Vec2 dir{std::sin(phi), -std::cos(phi)};
      o << " L " << X(tp.x - dir.x * len) << ' ' << Y(tp.y - dir.y * len);
    }
    o << " Z\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string dot_graph(const InsertionGraph& g, const GraphAnalysis& a) {
  std::vector<bool> undesired(g.modes.size(), false);
  for (const SinkInfo& s : a.sinks)
    if (!s.goal)
      for (int v : s.nodes) undesired[v] = true;
  std::vector<bool> goal(g.modes.size(), false), initial(g.modes.size(), false);
  for (int v : g.goal_nodes) goal[v] = true;
  for (int v : g.initial_nodes) initial[v] = true;

  std::ostringstream o;
  o << "digraph insertion {\n  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n";
  for (std::size_t v = 0; v < g.modes.size(); ++v) {
    o << "  n" << v << " [label=\"" << mode_name(g.modes[v]) << "\"";
    if (goal[v]) o << " shape=doublecircle";
    if (undesired[v]) o << " style=filled fillcolor=\"#f4b6b2\"";
    if (initial[v]) o << " penwidth=2";
    if (g.rest[v] && !goal[v] && !undesired[v]) o << " color=\"#2e8b57\"";
    o << "];\n";
  }
  for (std::size_t v = 0; v < g.modes.size(); ++v)
    for (int t : g.out[v]) o << "  n" << v << " -> n" << t << ";\n";
  o << "}\n";
  return o.str();
}

namespace {

struct Ring {
  double y = 0.0;
  double r = 0.0;
};

// Outer span of a closed polygon sliced at height y; exact for convex input.
double slice_halfwidth(const std::vector<Vec2>& poly, double y) {
  double lo = 1e300, hi = -1e300;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i], b = poly[(i + 1) % n];
    if (std::abs(a.y - y) < 1e-12) {
      lo = std::min(lo, a.x);
      hi = std::max(hi, a.x);
    }
    if ((a.y - y) * (b.y - y) < 0) {
      const double t = (y - a.y) / (b.y - a.y);
      const double x = a.x + t * (b.x - a.x);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  return hi < lo ? 0.0 : 0.5 * (hi - lo);
}

// Profile copies sit at multiples of the separation angle around the axis;
// the solid is the intersection of their supporting half-spaces.
std::vector<double> station_angles(double separation_deg) {
  std::vector<double> out;
  if (separation_deg <= 1e-9) return out;  // revolve instead
  const double step = separation_deg * kPi / 180.0;
  double a = 0.0;
  for (int k = 0; k < 360; ++k) {
    double m = std::fmod(a, 2.0 * kPi);
    if (m < 0) m += 2.0 * kPi;
    bool seen = false;
    for (double p : out)
      if (std::abs(p - m) < 1e-9 || std::abs(std::abs(p - m) - 2.0 * kPi) < 1e-9)
        seen = true;
    if (seen) break;
    out.push_back(m);
    a += step;
  }
  std::sort(out.begin(), out.end());
  return out;
}

double gain(double psi, const std::vector<double>& stations) {
  if (stations.empty()) return 1.0;
  double m = -1.0;
  for (double s : stations) m = std::max(m, std::cos(psi - s));
  return 1.0 / std::max(m, 0.05);
}

int add_vert(TriMesh& m, double x, double y, double z) {
  m.verts.push_back({x, y, z});
  return static_cast<int>(m.verts.size()) - 1;
}

void tri(TriMesh& m, int a, int b, int c) { m.tris.push_back({a, b, c}); }

// Lateral surface between consecutive rings; flip reverses orientation
// (used when the surface bounds a cavity).
void loft_strips(TriMesh& m, const std::vector<std::vector<int>>& rings,
                 const std::vector<int>& poles, bool flip) {
  auto emit = [&](int a, int b, int c) {
    if (flip)
      tri(m, a, c, b);
    else
      tri(m, a, b, c);
  };
  for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
    const bool lowPole = poles[k] >= 0;
    const bool hiPole = poles[k + 1] >= 0;
    if (lowPole && hiPole) continue;
    if (lowPole) {
      for (int i = 0; i < kAzimuth; ++i) {
        const int j = (i + 1) % kAzimuth;
        emit(poles[k], rings[k + 1][i], rings[k + 1][j]);
      }
    } else if (hiPole) {
      for (int i = 0; i < kAzimuth; ++i) {
        const int j = (i + 1) % kAzimuth;
        emit(poles[k + 1], rings[k][j], rings[k][i]);
      }
    } else {
      for (int i = 0; i < kAzimuth; ++i) {
        const int j = (i + 1) % kAzimuth;
        emit(rings[k][i], rings[k + 1][i], rings[k + 1][j]);
        emit(rings[k][i], rings[k + 1][j], rings[k][j]);
      }
    }
  }
}

// Azimuth 0 lies along +x and advances toward +z; zero-radius levels
// collapse to poles.
std::vector<std::vector<int>> build_rings(TriMesh& m,
                                          const std::vector<Ring>& profile,
                                          const std::vector<double>& stations,
                                          std::vector<int>& poles) {
  std::vector<std::vector<int>> rings(profile.size());
  poles.assign(profile.size(), -1);
  for (std::size_t k = 0; k < profile.size(); ++k) {
    if (profile[k].r < 1e-12) {
      poles[k] = add_vert(m, 0.0, profile[k].y, 0.0);
      continue;
    }
    rings[k].resize(kAzimuth);
    for (int i = 0; i < kAzimuth; ++i) {
      const double psi = 2.0 * kPi * i / kAzimuth;
      const double rho = profile[k].r * gain(psi, stations);
      rings[k][i] =
          add_vert(m, rho * std::cos(psi), profile[k].y, rho * std::sin(psi));
    }
  }
  return rings;
}

void cap_fan(TriMesh& m, const std::vector<int>& ring, double y, bool top,
             bool flip) {
  const int c = add_vert(m, 0.0, y, 0.0);
  for (int i = 0; i < kAzimuth; ++i) {
    const int j = (i + 1) % kAzimuth;
    if (top != flip)
      tri(m, c, ring[j], ring[i]);
    else
      tri(m, c, ring[i], ring[j]);
  }
}

std::vector<Ring> ring_profile(const std::vector<Vec2>& poly) {
  std::vector<double> ys;
  for (const Vec2& v : poly) ys.push_back(v.y);
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-9; }),
           ys.end());
  std::vector<Ring> out;
  for (double y : ys) out.push_back({y, slice_halfwidth(poly, y)});
  return out;
}

std::vector<Vec2> peg_outline(const JointDesign& d) {
  std::vector<Vec2> pts = d.peg.points;
  pts.push_back(d.peg.tip);
  std::vector<Vec2> hull = convex_hull(pts);
  if (hull.size() >= 3) return hull;
  // Collinear outline: widen into a sliver so the solid has volume.
  Box b;
  for (const Vec2& p : pts) b.add(p);
  const double h = std::max(b.maxy - b.miny, 1e-6);
  const double wd = std::max(0.05 * h, d.peg.bump_radius);
  const double cx = 0.5 * (b.minx + b.maxx);
  return {{cx - wd, b.miny}, {cx + wd, b.miny}, {cx + wd, b.maxy},
          {cx - wd, b.maxy}};
}

void weld(TriMesh& m) {
  std::map<std::array<long long, 3>, int> seen;
  std::vector<int> remap(m.verts.size());
  std::vector<std::array<double, 3>> verts;
  for (std::size_t i = 0; i < m.verts.size(); ++i) {
    std::array<long long, 3> key{};
    for (int k = 0; k < 3; ++k) key[k] = llround(m.verts[i][k] * 1e9);
    auto it = seen.find(key);
    if (it == seen.end()) {
      remap[i] = static_cast<int>(verts.size());
      seen.emplace(key, remap[i]);
      verts.push_back(m.verts[i]);
    } else {
      remap[i] = it->second;
    }
  }
  for (auto& t : m.tris)
    for (int k = 0; k < 3; ++k) t[k] = remap[t[k]];
  m.verts = std::move(verts);
}

}  // namespace

TriMesh peg_mesh(const JointDesign& d, double separation_deg) {
  TriMesh m;
  const std::vector<Vec2> outline = peg_outline(d);
  const std::vector<double> stations = station_angles(separation_deg);
  const std::vector<Ring> profile = ring_profile(outline);
  std::vector<int> poles;
  const auto rings = build_rings(m, profile, stations, poles);
  loft_strips(m, rings, poles, false);
  if (poles.front() < 0)
    cap_fan(m, rings.front(), profile.front().y, false, false);
  if (poles.back() < 0) cap_fan(m, rings.back(), profile.back().y, true, false);
  weld(m);
  return m;
}

TriMesh socket_mesh(const JointDesign& d, double separation_deg) {
  TriMesh m;
  const double w = d.socket.mouth_width();
  const std::vector<double> stations = station_angles(separation_deg);
  // Hole profile closed by the mouth segment; slices take the outer span,
  // so overhang pockets flatten to their widest extent.
  const std::vector<Ring> profile = ring_profile(d.socket.vertices);
  double rmax = 0.0;
  for (const Ring& r : profile) rmax = std::max(rmax, r.r);
  const double rb = 1.3 * rmax;
  const double by = profile.front().y - 0.3 * w;

  std::vector<int> poles;
  const auto rings = build_rings(m, profile, stations, poles);
  loft_strips(m, rings, poles, true);
  if (poles.front() < 0)
    cap_fan(m, rings.front(), profile.front().y, false, true);

  auto outer_ring = [&](double y) {
    std::vector<int> out(kAzimuth);
    for (int i = 0; i < kAzimuth; ++i) {
      const double psi = 2.0 * kPi * i / kAzimuth;
      const double rho = rb * gain(psi, stations);
      out[i] = add_vert(m, rho * std::cos(psi), y, rho * std::sin(psi));
    }
    return out;
  };
  const std::vector<int> top = outer_ring(0.0);
  const std::vector<int> bottom = outer_ring(by);
  const std::vector<int>& mouth = rings.back();
  for (int i = 0; i < kAzimuth; ++i) {
    const int j = (i + 1) % kAzimuth;
    tri(m, top[i], mouth[i], mouth[j]);
    tri(m, top[i], mouth[j], top[j]);
  }
  for (int i = 0; i < kAzimuth; ++i) {
    const int j = (i + 1) % kAzimuth;
    tri(m, bottom[i], top[i], top[j]);
    tri(m, bottom[i], top[j], bottom[j]);
  }
  cap_fan(m, bottom, by, false, false);
  weld(m);
  return m;
}

std::string obj_text(const TriMesh& m, const std::string& name) {
  std::ostringstream o;
  o << "o " << name << "\n";
  for (const auto& v : m.verts)
    o << "v " << num(v[0], "%.9g") << ' ' << num(v[1], "%.9g") << ' '
      << num(v[2], "%.9g") << "\n";
  for (const auto& t : m.tris)
    o << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << "\n";
  return o.str();
}

}  // namespace jointgen
