#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "fixtures.hpp"
#include "jointgen/contact.hpp"
#include "jointgen/seeds.hpp"

using namespace jointgen;

namespace {

// Independent feasibility oracle: at a fixed tilt the point-on-line
// constraints are linear in the translation, so solve the 2x2 normal
// system directly and re-check every constraint, segment bound, and
// clearance on the witness.
std::optional<Config> oracle_solve_at(const JointDesign& d,
                                      const ContactMode& mode, double theta,
                                      double tol) {
  const double c = std::cos(theta), s = std::sin(theta);
  auto rot = [&](Vec2 p) {
    return Vec2{c * p.x - s * p.y, s * p.x + c * p.y};
  };
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (const PairRef& pr : mode) {
    const Segment e = d.socket.edge(pr.edge);
    const Vec2 n = e.normal_left();
    const double rhs = dot(n, e.a - rot(d.peg.points[pr.point]));
    a11 += n.x * n.x;
    a12 += n.x * n.y;
    a22 += n.y * n.y;
    b1 += n.x * rhs;
    b2 += n.y * rhs;
  }
  const double det = a11 * a22 - a12 * a12;
  Config q;
  q.rotation = theta;
  if (det > 1e-12) {
    q.translation = {(a22 * b1 - a12 * b2) / det,
                     (a11 * b2 - a12 * b1) / det};
    return config_feasible(d, mode, q, tol) ? std::optional(q) : std::nullopt;
  }
  // rank 1: all normals parallel; scan the free direction for a witness
  const PairRef& pr = mode.front();
  const Segment e = d.socket.edge(pr.edge);
  const Vec2 n = e.normal_left();
  const Vec2 t = e.direction();
  const double base = dot(n, e.a - rot(d.peg.points[pr.point]));
  for (int k = -60; k <= 60; ++k) {
    const double tau = 0.025 * k;
    q.translation = n * base + t * tau;
    if (config_feasible(d, mode, q, tol)) return q;
  }
  return std::nullopt;
}

std::vector<JointDesign> small_corpus(int count) {
  return random_design_corpus(count, 20260816);
}

}  // namespace

TEST_CASE("solve_mode of the empty mode is free") {
  const JointDesign d = testfix::v_design();
  ModeSolution sol = solve_mode(d, {});
  REQUIRE(sol.realizable());
  CHECK(sol.dof == 3);
}

TEST_CASE("V-socket two-pair mode matches the theta-scan oracle") {
  const JointDesign d = testfix::v_design();
  const ContactMode goal = normalize_mode(d.correspondence.pairs);
  const double tol = contact_tol(d);
  ModeSolution sol = solve_mode(d, goal);
  REQUIRE(sol.realizable());

  // every representative satisfies the constraints per the oracle
  for (const ModeBranch& b : sol.branches)
    for (const Config& q : b.reps) {
      auto w = oracle_solve_at(d, goal, q.rotation, tol);
      REQUIRE(w.has_value());
      CHECK(std::abs(w->translation.x - q.translation.x) < 1e-6);
      CHECK(std::abs(w->translation.y - q.translation.y) < 1e-6);
    }

  // the oracle's feasible tilt set is covered by the reported branches
  const double step = 2.0 * kPi / 20000.0;
  for (int k = -10000; k < 10000; ++k) {
    const double theta = k * step;
    if (!oracle_solve_at(d, goal, theta, tol)) continue;
    bool covered = false;
    for (const ModeBranch& b : sol.branches)
      if (theta > b.theta_min() - 2.0 * step &&
          theta < b.theta_max() + 2.0 * step)
        covered = true;
    CHECK(covered);
  }
}

TEST_CASE("two pairs on one edge slide with one degree of freedom") {
  JointDesign d = testfix::flat_bottom_design();
  const ContactMode m = normalize_mode(d.correspondence.pairs);
  ModeSolution sol = solve_mode(d, m);
  REQUIRE(sol.realizable());
  CHECK(sol.dof >= 1);
  const double tol = contact_tol(d);
  int on_edge = 0;
  for (const ModeBranch& b : sol.branches)
    for (const Config& q : b.reps) {
      for (const PairRef& pr : m) {
        const Vec2 w = apply_config(q, d.peg.points[pr.point]);
        const auto hit = point_segment_contact(w, d.socket.edge(pr.edge), tol);
        CHECK(hit.kind != SegmentHit::Off);
        CHECK(std::abs(hit.signed_distance) < 1e-6);
      }
      ++on_edge;
    }
  CHECK(on_edge >= 3);
}

TEST_CASE("classify_config of a floating pose is empty") {
  const JointDesign d = testfix::v_design();
  Config q;
  q.translation = {0.0, 1.0};
  CHECK(classify_config(d, q, contact_tol(d)).empty());
}

TEST_CASE("solve then classify round-trips the mode") {
  for (const JointDesign& d : small_corpus(12)) {
    const double tol = contact_tol(d);
    const ContactMode goal = normalize_mode(d.correspondence.pairs);
    for (const auto& mode : {goal, ContactMode{goal.front()}}) {
      ModeSolution sol = solve_mode(d, mode);
      for (const ModeBranch& b : sol.branches)
        for (const Config& q : b.reps) {
          const ContactMode got = classify_config(d, q, tol);
          CHECK(mode_subset(mode, got));
        }
    }
  }
}

TEST_CASE("isolated three-pair modes agree with the oracle's zero count") {
  int dof0_modes = 0;
  for (const JointDesign& d : small_corpus(10)) {
    const double tol = contact_tol(d);
    const ContactMode goal = normalize_mode(d.correspondence.pairs);
    if (goal.size() < 3) continue;
    ContactMode m(goal.begin(), goal.begin() + 3);
    int edges = 0;
    for (size_t a = 0; a < m.size(); ++a)
      for (size_t b = a + 1; b < m.size(); ++b)
        if (m[a].edge != m[b].edge) ++edges;
    if (edges == 0) continue;
    ModeSolution sol = solve_mode(d, m);
    if (!sol.realizable()) continue;
    CHECK(sol.dof == 0);
    ++dof0_modes;
    // each isolated pose must sit where the oracle also finds a witness
    for (const ModeBranch& b : sol.branches) {
      auto w = oracle_solve_at(d, m, b.config.rotation, tol);
      REQUIRE(w.has_value());
      CHECK(norm(w->translation - b.config.translation) < 1e-6);
    }
  }
  CHECK(dof0_modes >= 3);
}

TEST_CASE("subsets of realizable three-pair modes stay realizable") {
  int tested = 0;
  for (const JointDesign& d : small_corpus(10)) {
    const ContactMode goal = normalize_mode(d.correspondence.pairs);
    if (goal.size() < 3) continue;
    ContactMode m(goal.begin(), goal.begin() + 3);
    if (!solve_mode(d, m).realizable()) continue;
    ++tested;
    for (int mask = 0; mask < 8; ++mask) {
      ContactMode sub;
      for (int i = 0; i < 3; ++i)
        if (mask & (1 << i)) sub.push_back(m[i]);
      sub = normalize_mode(sub);
      CHECK(solve_mode(d, sub).realizable());
    }
  }
  CHECK(tested >= 3);
}

TEST_CASE("mode set helpers keep sorted set semantics") {
  ContactMode m = normalize_mode({{2, 1}, {0, 0}, {2, 1}});
  CHECK(m.size() == 2);
  CHECK(m.front() == PairRef{0, 0});
  CHECK(mode_contains(m, {2, 1}));
  ContactMode w = mode_with(m, {1, 1});
  CHECK(w.size() == 3);
  CHECK(std::is_sorted(w.begin(), w.end()));
  CHECK(mode_subset(m, w));
  CHECK_FALSE(mode_subset(w, m));
  CHECK(mode_without(w, {1, 1}) == m);
}
