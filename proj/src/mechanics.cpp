#include "jointgen/mechanics.hpp"

#include <algorithm>
#include <cmath>

namespace jointgen {

Metric peg_metric(const PegDesign& peg) {
  Metric m;
  if (peg.points.empty()) return m;
  double s = 0.0;
  for (const Vec2& p : peg.points) s += norm2(p);
  m.rho2 = std::max(s / static_cast<double>(peg.points.size()), 1e-12);
  return m;
}

Vec3 applied_wrench(const JointDesign& d, const Config& q, Vec2 force) {
  Vec2 arm = rotated(d.peg.tip, q.rotation);
  return {force.x, force.y, cross(arm, force)};
}

Vec3 insertion_wrench(const JointDesign& d, const Config& q) {
  return applied_wrench(d, q, {0.0, -1.0});
}

std::vector<Vec3> contact_rows(const JointDesign& d, const Config& q,
                               const ContactMode& mode) {
  std::vector<Vec3> rows;
  rows.reserve(mode.size());
  for (const PairRef& p : mode) {
    Vec2 n = d.socket.edge(p.edge).normal_left();
    Vec2 r = rotated(d.peg.points[p.point], q.rotation);
    rows.push_back({n.x, n.y, cross(r, n)});
  }
  return rows;
}

std::vector<Vec3> support_rows(const JointDesign& d, const Config& q,
                               const ContactMode& mode, double tol) {
  std::vector<Vec3> rows = contact_rows(d, q, mode);
  const Vec2 left = d.socket.vertices.front();
  const Vec2 right = d.socket.vertices.back();
  for (const Vec2& p : d.peg.points) {
    Vec2 w = apply_config(q, p);
    if (std::abs(w.y - left.y) <= tol &&
        (w.x <= left.x + tol || w.x >= right.x - tol)) {
      Vec2 r = rotated(p, q.rotation);
      rows.push_back({0.0, 1.0, cross(r, Vec2{0.0, 1.0})});
    }
  }
  return rows;
}

std::vector<Vec3> wrench_generators(const JointDesign& d, const Config& q,
                                    const ContactMode& mode, double mu) {
  if (mu <= 0.0) return contact_rows(d, q, mode);
  std::vector<Vec3> rows;
  rows.reserve(2 * mode.size());
  for (const PairRef& p : mode) {
    Segment e = d.socket.edge(p.edge);
    Vec2 n = e.normal_left();
    Vec2 t = e.direction();
    Vec2 r = rotated(d.peg.points[p.point], q.rotation);
    for (Vec2 f : {n + t * mu, n - t * mu})
      rows.push_back({f.x, f.y, cross(r, f)});
  }
  return rows;
}

namespace {

// Orthonormal basis of the joint null space of the given rows.
std::vector<Vec3> null_basis(std::span<const Vec3> rows) {
  std::vector<Vec3> span_dirs;
  for (Vec3 r : rows) {
    for (Vec3 o : span_dirs) r = r - o * dot(r, o);
    double n = norm(r);
    if (n > 1e-10) span_dirs.push_back(r * (1.0 / n));
  }
  std::vector<Vec3> basis;
  const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (Vec3 e : axes) {
    for (Vec3 o : span_dirs) e = e - o * dot(e, o);
    for (Vec3 o : basis) e = e - o * dot(e, o);
    double n = norm(e);
    if (n > 1e-10) basis.push_back(e * (1.0 / n));
  }
  return basis;
}

// Solves the reduced SPD system Hr z = b for k <= 3.
bool solve_reduced(const double Hr[3][3], const double b[3], int k,
                   double z[3]) {
  if (k == 1) {
    if (std::abs(Hr[0][0]) < 1e-300) return false;
    z[0] = b[0] / Hr[0][0];
    return true;
  }
  if (k == 2) {
    double det = Hr[0][0] * Hr[1][1] - Hr[0][1] * Hr[1][0];
    if (std::abs(det) < 1e-300) return false;
    z[0] = (b[0] * Hr[1][1] - Hr[0][1] * b[1]) / det;
    z[1] = (Hr[0][0] * b[1] - b[0] * Hr[1][0]) / det;
    return true;
  }
  double det = Hr[0][0] * (Hr[1][1] * Hr[2][2] - Hr[1][2] * Hr[2][1]) -
               Hr[0][1] * (Hr[1][0] * Hr[2][2] - Hr[1][2] * Hr[2][0]) +
               Hr[0][2] * (Hr[1][0] * Hr[2][1] - Hr[1][1] * Hr[2][0]);
  if (std::abs(det) < 1e-300) return false;
  double c0[3] = {b[0], Hr[0][1], Hr[0][2]};
  double c1[3] = {b[1], Hr[1][1], Hr[1][2]};
  double c2[3] = {b[2], Hr[2][1], Hr[2][2]};
  z[0] = (c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) -
          c0[1] * (c1[0] * c2[2] - c1[2] * c2[0]) +
          c0[2] * (c1[0] * c2[1] - c1[1] * c2[0])) /
         det;
  double d0[3] = {Hr[0][0], b[0], Hr[0][2]};
  double d1[3] = {Hr[1][0], b[1], Hr[1][2]};
  double d2[3] = {Hr[2][0], b[2], Hr[2][2]};
  z[1] = (d0[0] * (d1[1] * d2[2] - d1[2] * d2[1]) -
          d0[1] * (d1[0] * d2[2] - d1[2] * d2[0]) +
          d0[2] * (d1[0] * d2[1] - d1[1] * d2[0])) /
         det;
  double e0[3] = {Hr[0][0], Hr[0][1], b[0]};
  double e1[3] = {Hr[1][0], Hr[1][1], b[1]};
  double e2[3] = {Hr[2][0], Hr[2][1], b[2]};
  z[2] = (e0[0] * (e1[1] * e2[2] - e1[2] * e2[1]) -
          e0[1] * (e1[0] * e2[2] - e1[2] * e2[0]) +
          e0[2] * (e1[0] * e2[1] - e1[1] * e2[0])) /
         det;
  return true;
}

// Unconstrained maximizer of dot(w,u) - 0.5 u'Mu restricted to span(basis).
Vec3 subspace_optimum(Vec3 w, const std::vector<Vec3>& basis,
                      const Metric& M) {
  int k = static_cast<int>(basis.size());
  if (k == 0) return {0, 0, 0};
  double Hr[3][3] = {};
  double b[3] = {};
  for (int i = 0; i < k; ++i) {
    b[i] = dot(w, basis[i]);
    for (int j = 0; j < k; ++j) Hr[i][j] = dot(basis[i], M.mul(basis[j]));
  }
  double z[3] = {};
  if (!solve_reduced(Hr, b, k, z)) return {0, 0, 0};
  Vec3 u{0, 0, 0};
  for (int i = 0; i < k; ++i) u = u + basis[i] * z[i];
  return u;
}

}  // namespace

MotionResult best_motion(Vec3 w, std::span<const Vec3> ineq,
                         std::span<const Vec3> eq, const Metric& M) {
  const int n = static_cast<int>(ineq.size());
  double row_scale = 1.0;
  for (Vec3 r : ineq) row_scale = std::max(row_scale, norm(r));

  auto feasible = [&](Vec3 u) {
    double tol = 1e-9 * row_scale * (norm(u) + 1.0);
    for (Vec3 r : ineq)
      if (dot(r, u) < -tol) return false;
    return true;
  };

  MotionResult best;
  best.u = {0, 0, 0};
  best.power = 0.0;
  best.objective = 0.0;

  auto consider = [&](const std::vector<Vec3>& eq_rows) {
    auto basis = null_basis(eq_rows);
    Vec3 u = subspace_optimum(w, basis, M);
    if (!feasible(u)) return;
    double obj = dot(w, u) - 0.5 * M.quad(u);
    if (obj > best.objective) {
      best.u = u;
      best.power = dot(w, u);
      best.objective = obj;
    }
  };

  std::vector<Vec3> eq_rows(eq.begin(), eq.end());
  consider(eq_rows);
  for (int i = 0; i < n; ++i) {
    eq_rows.push_back(ineq[i]);
    consider(eq_rows);
    for (int j = i + 1; j < n; ++j) {
      eq_rows.push_back(ineq[j]);
      consider(eq_rows);
      eq_rows.pop_back();
    }
    eq_rows.pop_back();
  }
  return best;
}

double rest_power_tol(Vec3 w, const Metric& M) {
  double free_power = dot(w, M.solve(w));
  return 1e-9 * std::max(free_power, 1e-12);
}

bool resting(const JointDesign& d, const Config& q, const ContactMode& mode,
             const Metric& M, double mu) {
  Vec3 w = insertion_wrench(d, q);
  auto gens = wrench_generators(d, q, mode, mu);
  MotionResult m = best_motion(w, gens, {}, M);
  return m.power <= rest_power_tol(w, M);
}

Config project_to_mode(const JointDesign& d, const ContactMode& mode,
                       Config q, const Metric& M, int iters) {
  if (mode.empty()) return q;
  for (int it = 0; it < iters; ++it) {
    std::vector<Vec3> rows;
    std::vector<double> g;
    rows.reserve(mode.size());
    for (const PairRef& p : mode) {
      Segment e = d.socket.edge(p.edge);
      Vec2 n = e.normal_left();
      Vec2 w = apply_config(q, d.peg.points[p.point]);
      Vec2 r = rotated(d.peg.points[p.point], q.rotation);
      rows.push_back({n.x, n.y, cross(r, n)});
      g.push_back(dot(n, w) - dot(n, e.a));
    }
    double worst = 0.0;
    for (double v : g) worst = std::max(worst, std::abs(v));
    if (worst < 1e-13) break;
    // minimum-metric-norm correction: dq = -Minv J' (J Minv J')^-1 g
    int k = static_cast<int>(rows.size());
    if (k > 3) k = 3;  // constraints beyond rank 3 are dependent in SE(2)
    double A[3][3] = {};
    double b[3] = {};
    std::vector<Vec3> minv_rows(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) minv_rows[i] = M.solve(rows[i]);
    // normal equations on at most the first three independent rows
    std::vector<int> pick;
    {
      std::vector<Vec3> ortho;
      for (size_t i = 0; i < rows.size() && pick.size() < 3; ++i) {
        Vec3 v = rows[i];
        for (Vec3 o : ortho) v = v - o * dot(v, o);
        double nv = norm(v);
        if (nv > 1e-9) {
          ortho.push_back(v * (1.0 / nv));
          pick.push_back(static_cast<int>(i));
        }
      }
    }
    k = static_cast<int>(pick.size());
    if (k == 0) break;
    for (int i = 0; i < k; ++i) {
      b[i] = -g[pick[i]];
      for (int j = 0; j < k; ++j)
        A[i][j] = dot(rows[pick[i]], minv_rows[pick[j]]);
    }
    double lam[3] = {};
    if (!solve_reduced(A, b, k, lam)) break;
    Vec3 dq{0, 0, 0};
    for (int i = 0; i < k; ++i) dq = dq + minv_rows[pick[i]] * lam[i];
    q.translation += Vec2{dq.x, dq.y};
    q.rotation = normalize_angle(q.rotation + dq.z);
  }
  return q;
}

Config screw_advance(const Config& q, Vec3 u, double s) {
  Vec2 v{u.x, u.y};
  double omega = u.z;
  Config out = q;
  if (std::abs(omega) * s < 1e-12) {
    out.translation += v * s;
    return out;
  }
  Vec2 icr = q.translation - Vec2{v.y, -v.x} * (1.0 / omega);
  out.translation = icr + rotated(q.translation - icr, omega * s);
  out.rotation = normalize_angle(q.rotation + omega * s);
  return out;
}

}  // namespace jointgen
