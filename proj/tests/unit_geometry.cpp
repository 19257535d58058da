#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "jointgen/geometry.hpp"

using namespace jointgen;

namespace {

// Oracle: apply the 3x3 homogeneous matrix product instead of the direct
// formula.
Vec2 matrix_apply(const Config& q, const Vec2& p) {
  const double c = std::cos(q.rotation), s = std::sin(q.rotation);
  const double m[3][3] = {{c, -s, q.translation.x},
                          {s, c, q.translation.y},
                          {0, 0, 1}};
  return {m[0][0] * p.x + m[0][1] * p.y + m[0][2],
          m[1][0] * p.x + m[1][1] * p.y + m[1][2]};
}

Config matrix_compose(const Config& a, const Config& b) {
  Config out;
  out.rotation = normalize_angle(a.rotation + b.rotation);
  out.translation = matrix_apply(a, b.translation);
  return out;
}

}  // namespace

TEST_CASE("config composition matches homogeneous matrices") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 200; ++it) {
    Config a{{u(eng), u(eng)}, u(eng)};
    Config b{{u(eng), u(eng)}, u(eng)};
    Vec2 p{u(eng), u(eng)};
    const Vec2 direct = apply_config(compose(a, b), p);
    const Vec2 oracle = matrix_apply(matrix_compose(a, b), p);
    CHECK(std::abs(direct.x - oracle.x) < 1e-12);
    CHECK(std::abs(direct.y - oracle.y) < 1e-12);

    const Config inv = inverse_config(a);
    const Vec2 round = apply_config(inv, apply_config(a, p));
    CHECK(std::abs(round.x - p.x) < 1e-12);
    CHECK(std::abs(round.y - p.y) < 1e-12);
  }
}

TEST_CASE("normalize_angle lands in (-pi, pi] and preserves direction") {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int it = 0; it < 500; ++it) {
    const double a = u(eng);
    const double n = normalize_angle(a);
    CHECK(n > -kPi - 1e-15);
    CHECK(n <= kPi + 1e-15);
    CHECK(std::abs(std::sin(n - a)) < 1e-9);
    CHECK(std::cos(n - a) > 0.999999999);
  }
}

TEST_CASE("point_segment_contact against scalar projection oracle") {
  std::mt19937_64 eng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int interior = 0;
  for (int it = 0; it < 300; ++it) {
    Segment s{{u(eng), u(eng)}, {u(eng), u(eng)}};
    const double len = norm(s.b - s.a);
    if (len < 1e-6) continue;
    const Vec2 p{u(eng), u(eng)};
    const auto hit = point_segment_contact(p, s);

    const Vec2 d = s.b - s.a;
    const double t = dot(p - s.a, d) / dot(d, d);
    if (t > 1e-6 && t < 1 - 1e-6) {
      const double sd = dot(p - s.a, s.normal_left());
      CHECK(std::abs(hit.signed_distance - sd) < 1e-12);
      CHECK(std::abs(hit.param - t * len) < 1e-9);
      CHECK(hit.kind ==
            (std::abs(sd) <= kGeomTol ? SegmentHit::OnInterior
                                      : SegmentHit::Off));
      ++interior;
    }
    // touching points must classify as contacts
    const double tc = 0.2 + 0.6 * std::clamp(t, 0.0, 1.0);
    const Vec2 on = s.a + d * tc;
    const auto touch = point_segment_contact(on, s);
    CHECK(touch.kind == SegmentHit::OnInterior);
    CHECK(std::abs(touch.signed_distance) < 1e-9);
  }
  CHECK(interior > 50);
}

TEST_CASE("rotate_about fixes its center and preserves distances") {
  const Vec2 c{0.3, -0.7};
  const Vec2 img = rotate_about(c, c, 0.9);
  CHECK(std::abs(img.x - c.x) < 1e-12);
  CHECK(std::abs(img.y - c.y) < 1e-12);
  const Vec2 p{1.1, 0.4};
  const Vec2 moved = rotate_about(p, c, 0.9);
  CHECK(std::abs(norm(moved - c) - norm(p - c)) < 1e-12);
}

TEST_CASE("socket_clearance sign matches crossing-number point location") {
  const std::vector<Vec2> prof{
      {-0.5, 0.0}, {-0.45, -0.6}, {0.4, -0.62}, {0.5, 0.0}};

  auto inside_hole = [&](const Vec2& p) {
    // crossing number against the hole polygon (profile closed by the mouth)
    int cnt = 0;
    const std::size_t n = prof.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = prof[i], b = prof[(i + 1) % n];
      if ((a.y > p.y) != (b.y > p.y)) {
        const double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
        if (x > p.x) ++cnt;
      }
    }
    return (cnt % 2) == 1;
  };

  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> ux(-0.9, 0.9), uy(-0.9, 0.3);
  int checked = 0;
  for (int it = 0; it < 4000; ++it) {
    const Vec2 p{ux(eng), uy(eng)};
    const double clr = socket_clearance(p, prof);
    if (std::abs(clr) < 2e-3 || std::abs(p.y) < 2e-3) continue;
    if (p.y > 0.0) {
      CHECK(clr > 0.0);  // above the mouth line is free
    } else if (inside_hole(p)) {
      CHECK(clr > 0.0);
    } else {
      CHECK(clr < 0.0);
    }
    ++checked;
  }
  CHECK(checked > 3000);
}
