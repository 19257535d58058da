#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "jointgen/design.hpp"
#include "jointgen/seeds.hpp"

using namespace jointgen;

TEST_CASE("validate_design flags parallel walls and co-linear points") {
  JointDesign d = testfix::v_design();
  d.socket = testfix::rect_socket();
  auto rep = validate_design(d);
  CHECK_FALSE(rep.valid());
  CHECK(rep.has("socket_edges_parallel"));

  JointDesign c = testfix::v_design();
  c.socket.vertices = {{-0.5, 0.0}, {-0.1, -0.5}, {0.2, -0.45}, {0.5, 0.0}};
  c.peg.points = {{-0.2, 0.0}, {0.0, 0.0}, {0.2, 0.0}};
  c.correspondence.pairs = {{0, 0}, {1, 1}, {2, 2}};
  auto rep2 = validate_design(c);
  CHECK(rep2.has("peg_points_collinear"));
}

TEST_CASE("validate_design accepts the V fixture") {
  auto rep = validate_design(testfix::v_design());
  CHECK(rep.valid());
}

TEST_CASE("validate_design enforces count and redundancy bounds") {
  JointDesign d = testfix::v_design();
  d.peg.points = {{-0.3, 0.0}, {-0.2, 0.1}, {-0.1, -0.1}, {0.0, 0.1},
                  {0.1, -0.1}, {0.2, 0.1},  {0.3, -0.05}};
  auto rep = validate_design(d);
  CHECK_FALSE(rep.valid());

  JointDesign r = testfix::v_design();  // 2 points vs 4 edges: |n-m| > 1
  r.socket.vertices = {
      {-0.5, 0.0}, {-0.3, -0.4}, {0.0, -0.55}, {0.3, -0.35}, {0.5, 0.0}};
  CHECK_FALSE(validate_design(r).valid());
}

TEST_CASE("scale_socket matches per-vertex affine oracle") {
  SocketDesign s;
  s.vertices = {{-0.5, 0.0}, {-0.2, -0.55}, {0.3, -0.5}, {0.5, 0.0}};
  const Vec2 c = s.mouth_center();

  SocketDesign same = scale_socket(s, 1.0);
  for (size_t i = 0; i < s.vertices.size(); ++i) {
    CHECK(std::abs(same.vertices[i].x - s.vertices[i].x) < 1e-15);
    CHECK(std::abs(same.vertices[i].y - s.vertices[i].y) < 1e-15);
  }

  SocketDesign dbl = scale_socket(s, 2.0);
  for (int j = 0; j < s.edge_count(); ++j)
    CHECK(std::abs(dbl.edge(j).length() - 2.0 * s.edge(j).length()) < 1e-12);

  SocketDesign v = scale_socket(s, 1.05);
  CHECK(std::abs(v.mouth_width() - 1.05 * s.mouth_width()) < 1e-12);
  for (size_t i = 0; i < s.vertices.size(); ++i) {
    const Vec2 want = c + (s.vertices[i] - c) * 1.05;
    CHECK(std::abs(v.vertices[i].x - want.x) < 1e-12);
    CHECK(std::abs(v.vertices[i].y - want.y) < 1e-12);
  }
}

TEST_CASE("scale_socket composes multiplicatively") {
  SocketDesign s;
  s.vertices = {{-0.5, 0.0}, {-0.1, -0.6}, {0.2, -0.5}, {0.5, 0.0}};
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int it = 0; it < 50; ++it) {
    const double a = u(eng), b = u(eng);
    SocketDesign lhs = scale_socket(scale_socket(s, a), b);
    SocketDesign rhs = scale_socket(s, a * b);
    for (size_t i = 0; i < s.vertices.size(); ++i) {
      CHECK(std::abs(lhs.vertices[i].x - rhs.vertices[i].x) < 1e-10);
      CHECK(std::abs(lhs.vertices[i].y - rhs.vertices[i].y) < 1e-10);
    }
  }
}

namespace {

JointDesign rigidly_moved(const JointDesign& d, Vec2 t, double ang) {
  JointDesign out = d;
  const Vec2 c = {std::cos(ang), std::sin(ang)};
  auto mov = [&](Vec2 p) {
    return Vec2{c.x * p.x - c.y * p.y + t.x, c.y * p.x + c.x * p.y + t.y};
  };
  for (Vec2& p : out.socket.vertices) p = mov(p);
  out.socket.insertion_axis = {c.x * 0.0 - c.y * -1.0, c.y * 0.0 + c.x * -1.0};
  return out;
}

}  // namespace

TEST_CASE("canonicalize is idempotent and rigid-transform invariant") {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0), a(-0.6, 0.6);
  const JointDesign base = canonicalize(testfix::v_design());
  {
    const JointDesign again = canonicalize(base);
    for (size_t i = 0; i < base.socket.vertices.size(); ++i) {
      CHECK(base.socket.vertices[i].x == again.socket.vertices[i].x);
      CHECK(base.socket.vertices[i].y == again.socket.vertices[i].y);
    }
    CHECK(base.peg.tip.x == again.peg.tip.x);
    CHECK(base.peg.tip.y == again.peg.tip.y);
  }
  for (int it = 0; it < 30; ++it) {
    const JointDesign moved =
        rigidly_moved(testfix::v_design(), {u(eng), u(eng)}, a(eng));
    const JointDesign canon = canonicalize(moved);
    for (size_t i = 0; i < base.socket.vertices.size(); ++i) {
      CHECK(std::abs(canon.socket.vertices[i].x - base.socket.vertices[i].x) <
            1e-9);
      CHECK(std::abs(canon.socket.vertices[i].y - base.socket.vertices[i].y) <
            1e-9);
    }
    CHECK(std::abs(canon.socket.insertion_axis.x) < 1e-12);
    CHECK(std::abs(canon.socket.insertion_axis.y + 1.0) < 1e-12);
  }
}

TEST_CASE("entry_poses cover the error box corners and center") {
  JointDesign d = testfix::v_design();
  ErrorModel e;
  e.dx = 0.02;
  e.dtheta = 0.05;
  auto poses = entry_poses(d, e, 5);
  CHECK(poses.size() == 25);
  bool center = false, corner = false;
  for (const Config& q : poses) {
    CHECK(std::abs(q.translation.x) <= e.dx + 1e-12);
    CHECK(std::abs(q.rotation) <= e.dtheta + 1e-12);
    if (std::abs(q.translation.x) < 1e-12 && std::abs(q.rotation) < 1e-12)
      center = true;
    if (std::abs(std::abs(q.translation.x) - e.dx) < 1e-12 &&
        std::abs(std::abs(q.rotation) - e.dtheta) < 1e-12)
      corner = true;
  }
  CHECK(center);
  CHECK(corner);
}

TEST_CASE("seed designs validate across the sweep cells") {
  for (auto [n, m] : {std::pair{4, 5}, {5, 5}, {5, 6}, {6, 6}}) {
    SeedParams sp;
    sp.points = n;
    sp.edges = m;
    sp.seed = 1;
    JointDesign d = make_seed_design(sp);
    CHECK(validate_design(d).valid());
    CHECK(d.point_count() == n);
    CHECK(d.edge_count() == m);
  }
}
