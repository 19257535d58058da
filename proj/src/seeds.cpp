#include "jointgen/seeds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jointgen/contact.hpp"

namespace jointgen {

namespace {

SocketDesign bowl_socket(const SeedParams& sp, Rng& rng, double jitter) {
  const double w = sp.mouth_width;
  const int m = sp.edges;
  SocketDesign s;
  s.vertices.push_back({-0.5 * w, 0.0});
  for (int k = 1; k < m; ++k) {
    double t = static_cast<double>(k) / m;
    double x = -0.5 * w * std::cos(kPi * t);
    double y = -sp.depth * w * std::sin(kPi * t);
    x += jitter * w * (rng.uniform() - 0.5) / m;
    y += jitter * w * (rng.uniform() - 0.5) / m;
    s.vertices.push_back({x, y});
  }
  s.vertices.push_back({0.5 * w, 0.0});

  if (sp.lip_overhang_deg != 0.0 && m >= 3) {
    double tan_ov = std::tan(sp.lip_overhang_deg * kPi / 180.0);
    s.vertices[1].x += s.vertices[1].y * tan_ov;
    s.vertices[m - 1].x -= s.vertices[m - 1].y * tan_ov;
  }
  return s;
}

std::vector<int> corresponded_edges(int n, int m) {
  std::vector<int> edges;
  if (m >= n) {
    int skip = (m > n) ? m / 2 : -1;
    for (int j = 0; j < m && static_cast<int>(edges.size()) < n; ++j)
      if (j != skip) edges.push_back(j);
  } else {
    int dup = m / 2;
    for (int j = 0; j < m; ++j) {
      edges.push_back(j);
      if (j == dup) edges.push_back(j);
    }
  }
  return edges;
}

}  // namespace

JointDesign make_seed_design(const SeedParams& sp) {
  if (sp.points < 2 || sp.points > 6 || sp.edges < 2 || sp.edges > 7 ||
      std::abs(sp.points - sp.edges) > 1)
    throw std::invalid_argument("seed cell outside supported range");

  Rng rng(sp.seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  const double w = sp.mouth_width;

  for (int attempt = 0; attempt < 60; ++attempt) {
    double jitter = sp.jitter * (attempt < 20 ? 1.0 : attempt < 40 ? 0.5 : 0.2);
    SocketDesign socket = bowl_socket(sp, rng, jitter);

    JointDesign d;
    d.socket = socket;

    auto edges = corresponded_edges(sp.points, sp.edges);
    std::vector<Vec2> world_points;
    int prev_edge = -1;
    for (int i = 0; i < sp.points; ++i) {
      int j = edges[i];
      Segment e = socket.edge(j);
      double f;
      if (i + 1 < sp.points && edges[i + 1] == j)
        f = rng.range(0.2, 0.38);
      else if (j == prev_edge)
        f = rng.range(0.62, 0.8);
      else
        f = rng.range(0.35, 0.65);
      prev_edge = j;
      world_points.push_back(e.a + (e.b - e.a) * f);
      d.correspondence.pairs.push_back({i, j});
    }

    Vec2 centroid{0.0, 0.0};
    for (const Vec2& p : world_points) centroid += p;
    centroid = centroid * (1.0 / static_cast<double>(world_points.size()));
    for (const Vec2& p : world_points) d.peg.points.push_back(p - centroid);
    d.peg.tip = Vec2{0.0, 0.35 * w} - Vec2{0.0, centroid.y};
    d.peg.bump_radius = 0.03 * w;

    if (!validate_design(d).valid()) continue;
    ContactMode full = normalize_mode(d.correspondence.pairs);
    if (!solve_mode(d, full).realizable()) continue;
    return d;
  }
  throw std::runtime_error("seed generation failed to produce a valid design");
}

JointDesign wedge_trap_design(double overhang_deg) {
  SeedParams sp;
  sp.points = 3;
  sp.edges = 4;
  sp.seed = 7;
  sp.depth = 0.75;
  sp.jitter = 0.05;
  sp.lip_overhang_deg = overhang_deg;
  return make_seed_design(sp);
}

std::vector<JointDesign> random_design_corpus(int count, uint64_t seed) {
  std::vector<JointDesign> out;
  Rng rng(seed);
  uint64_t sub = 0;
  while (static_cast<int>(out.size()) < count) {
    SeedParams sp;
    sp.points = 3 + rng.upto(4);                       // 3..6
    int dm = rng.upto(3) - 1;                          // -1..1
    sp.edges = std::clamp(sp.points + dm, 2, 7);
    sp.seed = seed * 1000003ULL + sub++;
    sp.depth = rng.range(0.6, 1.0);
    sp.jitter = rng.range(0.08, 0.2);
    if (rng.uniform() < 0.2) sp.lip_overhang_deg = rng.range(0.5, 2.0);
    try {
      out.push_back(make_seed_design(sp));
    } catch (const std::exception&) {
      // skip cells the jitter draw could not make valid
    }
    if (sub > static_cast<uint64_t>(count) * 50 + 100)
      throw std::runtime_error("corpus generation stalled");
  }
  return out;
}

}  // namespace jointgen
