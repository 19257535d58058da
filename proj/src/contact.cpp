#include "jointgen/contact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>

namespace jointgen {

ContactMode normalize_mode(ContactMode m) {
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return m;
}

ContactMode mode_with(const ContactMode& m, PairRef p) {
  ContactMode out = m;
  out.push_back(p);
  return normalize_mode(std::move(out));
}

ContactMode mode_without(const ContactMode& m, PairRef p) {
  ContactMode out;
  out.reserve(m.size());
  for (const PairRef& q : m)
    if (!(q == p)) out.push_back(q);
  return out;
}

bool mode_contains(const ContactMode& m, PairRef p) {
  return std::binary_search(m.begin(), m.end(), p);
}

bool mode_subset(const ContactMode& sub, const ContactMode& sup) {
  return std::includes(sup.begin(), sup.end(), sub.begin(), sub.end());
}

std::string mode_name(const ContactMode& m) {
  if (m.empty()) return "{}";
  std::string s = "{";
  for (size_t k = 0; k < m.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(m[k].point) + ":" + std::to_string(m[k].edge);
  }
  s += "}";
  return s;
}

double contact_tol(const JointDesign& d) {
  return 1e-6 * d.socket.mouth_width();
}

ContactMode classify_config(const JointDesign& d, const Config& q,
                            double tol) {
  ContactMode mode;
  for (int i = 0; i < d.point_count(); ++i) {
    Vec2 w = apply_config(q, d.peg.points[i]);
    for (int j = 0; j < d.edge_count(); ++j) {
      SegmentContact c = point_segment_contact(w, d.socket.edge(j), tol);
      if (c.kind != SegmentHit::Off && std::abs(c.signed_distance) <= tol)
        mode.push_back({i, j});
    }
  }
  return normalize_mode(std::move(mode));
}

bool config_feasible(const JointDesign& d, const ContactMode& mode,
                     const Config& q, double tol) {
  for (const PairRef& p : mode) {
    Vec2 w = apply_config(q, d.peg.points[p.point]);
    SegmentContact c = point_segment_contact(w, d.socket.edge(p.edge), tol);
    if (c.kind == SegmentHit::Off || std::abs(c.signed_distance) > tol)
      return false;
  }
  for (const Vec2& p : d.peg.points) {
    Vec2 w = apply_config(q, p);
    if (socket_clearance(w, d.socket.vertices) < -tol) return false;
  }
  return true;
}

double ModeBranch::theta_min() const {
  switch (kind) {
    case Kind::Isolated: return config.rotation;
    case Kind::Slide: return theta_fixed;
    case Kind::Free: return -kPi;
    default: return theta_lo;
  }
}

double ModeBranch::theta_max() const {
  switch (kind) {
    case Kind::Isolated: return config.rotation;
    case Kind::Slide: return theta_fixed;
    case Kind::Free: return kPi;
    default: return theta_hi;
  }
}

namespace {

struct PairRow {
  Vec2 n;        // unit edge normal, into free space
  double off;    // line offset: dot(n, x) = off on the edge line
  double alpha;  // dot(n, c)
  double beta;   // cross(c, n)
  Segment seg;
  Vec2 c;
};

PairRow make_row(const JointDesign& d, PairRef p) {
  Segment e = d.socket.edge(p.edge);
  Vec2 n = e.normal_left();
  Vec2 c = d.peg.points[p.point];
  return {n, dot(n, e.a), dot(n, c), cross(c, n), e, c};
}

double rhs_at(const PairRow& r, double theta) {
  return r.off - r.alpha * std::cos(theta) - r.beta * std::sin(theta);
}

// Runs of pred over [lo, hi] sampled at n points, boundaries bisected.
std::vector<std::pair<double, double>> scan_runs(
    double lo, double hi, int n, const std::function<bool(double)>& pred) {
  std::vector<std::pair<double, double>> runs;
  if (!(hi > lo)) {
    if (pred(lo)) runs.push_back({lo, lo});
    return runs;
  }
  auto refine = [&](double bad, double good) {
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (bad + good);
      if (mid == bad || mid == good) break;
      (pred(mid) ? good : bad) = mid;
    }
    return good;
  };
  double step = (hi - lo) / (n - 1);
  bool prev = pred(lo);
  double run_start = prev ? lo : 0.0;
  for (int i = 1; i < n; ++i) {
    double x = lo + i * step;
    bool cur = pred(x);
    if (cur && !prev) run_start = refine(x - step, x);
    if (!cur && prev) runs.push_back({run_start, refine(x, x - step)});
    prev = cur;
  }
  if (prev) runs.push_back({run_start, hi});
  return runs;
}

// Circular variant over (-pi, pi]; a run crossing the seam is returned with
// hi > pi so that [lo, hi] stays contiguous.
std::vector<std::pair<double, double>> scan_runs_circular(
    const std::function<bool(double)>& pred) {
  const int n = kThetaScan;
  std::vector<double> xs(n);
  std::vector<char> ok(n);
  bool all = true, none = true;
  for (int i = 0; i < n; ++i) {
    xs[i] = -kPi + 2.0 * kPi * i / n;
    ok[i] = pred(xs[i]);
    all = all && ok[i];
    none = none && !ok[i];
  }
  std::vector<std::pair<double, double>> runs;
  if (none) return runs;
  if (all) {
    runs.push_back({-kPi, kPi});
    return runs;
  }
  auto refine = [&](double bad, double good) {
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (bad + good);
      if (mid == bad || mid == good) break;
      (pred(mid) ? good : bad) = mid;
    }
    return good;
  };
  int start = 0;
  while (ok[start]) ++start;  // some index is infeasible
  auto coord = [&](int t) { return -kPi + 2.0 * kPi * t / n; };
  for (int k = 0; k < n; ++k) {
    int t = start + k;
    if (!ok[t % n] && ok[(t + 1) % n]) {
      int len = 1;
      while (ok[(t + 1 + len) % n]) ++len;
      double lo = refine(coord(t), coord(t + 1));
      double hi = refine(coord(t + len + 1), coord(t + len));
      double lo_n = normalize_angle(lo);
      hi += lo_n - lo;
      runs.push_back({lo_n, hi});
      k += len;
    }
  }
  return runs;
}

// Depth by which the pose at theta misses feasibility: segment-bound
// overshoot of any mode pair or penetration of any peg point. Zero on
// feasible poses.
double pose_violation(const JointDesign& d, const ContactMode& mode,
                      const Config& q, double tol) {
  double v = 0.0;
  for (const PairRef& p : mode) {
    Vec2 w = apply_config(q, d.peg.points[p.point]);
    SegmentContact c = point_segment_contact(w, d.socket.edge(p.edge), tol);
    if (c.kind == SegmentHit::Off) v = std::max(v, std::abs(c.signed_distance));
  }
  for (const Vec2& p : d.peg.points) {
    Vec2 w = apply_config(q, p);
    v = std::max(v, -(socket_clearance(w, d.socket.vertices) + tol));
  }
  return std::max(v, 0.0);
}

// Ternary-polish a violation valley toward a strictly feasible coordinate.
// The valley floor is an exact-zero plateau whose closure meets infeasible
// knife edges, and the tie-break otherwise creeps onto the wrong side, so
// accept the first probe that lands inside the feasible set rather than
// trusting the converged midpoint.
std::optional<double> polish_feasible(
    const std::function<double(double)>& viol,
    const std::function<bool(double)>& pred, double lo, double hi,
    double probe_cap) {
  for (int it = 0; it < 120; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    const double v1 = viol(m1), v2 = viol(m2);
    if (v1 == 0.0 && pred(m1)) return m1;
    if (v2 == 0.0 && pred(m2)) return m2;
    (v1 < v2 ? hi : lo) = (v1 < v2 ? m2 : m1);
  }
  const double mid = 0.5 * (lo + hi);
  if (pred(mid)) return mid;
  for (double delta = 1e-12; delta <= probe_cap; delta *= 10.0) {
    if (pred(mid - delta)) return mid - delta;
    if (pred(mid + delta)) return mid + delta;
  }
  return std::nullopt;
}

// Feasible windows narrower than the grid step hide between scan samples;
// polish the violation minima and bisect a window open around any that
// reach feasibility. Windows are clamped to [bound_lo, bound_hi] and
// returned sorted with overlaps merged; wit_out receives one feasible
// coordinate inside each window.
std::vector<std::pair<double, double>> rescue_runs_grid(
    const std::vector<double>& grid, double x0, double step, bool circular,
    double bound_lo, double bound_hi,
    const std::function<double(double)>& viol,
    const std::function<bool(double)>& pred,
    std::vector<double>* wit_out = nullptr) {
  const int n = static_cast<int>(grid.size());
  auto refine = [&](double bad, double good) {
    bad = std::clamp(bad, bound_lo, bound_hi);
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (bad + good);
      if (mid == bad || mid == good) break;
      (pred(mid) ? good : bad) = mid;
    }
    return good;
  };
  std::vector<std::pair<double, double>> runs;
  std::vector<double> wits;
  for (int i = 0; i < n; ++i) {
    const double prev =
        circular ? grid[(i + n - 1) % n] : grid[std::max(i - 1, 0)];
    const double next =
        circular ? grid[(i + 1) % n] : grid[std::min(i + 1, n - 1)];
    if (grid[i] > prev || grid[i] > next) continue;  // keep local minima
    const double xi = x0 + step * i;
    auto hit = polish_feasible(viol, pred,
                               std::max(xi - step, bound_lo),
                               std::min(xi + step, bound_hi), step);
    if (!hit) continue;
    runs.push_back({refine(*hit - step, *hit), refine(*hit + step, *hit)});
    wits.push_back(*hit);
  }
  // adjacent minima can converge into one window
  std::vector<size_t> order(runs.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return runs[a] < runs[b]; });
  std::vector<std::pair<double, double>> merged;
  std::vector<double> mwits;
  for (size_t k : order) {
    if (!merged.empty() && runs[k].first <= merged.back().second + 1e-12) {
      merged.back().second = std::max(merged.back().second, runs[k].second);
    } else {
      merged.push_back(runs[k]);
      mwits.push_back(wits[k]);
    }
  }
  if (wit_out) *wit_out = std::move(mwits);
  return merged;
}

std::vector<std::pair<double, double>> rescue_theta_runs(
    const JointDesign& d, const ContactMode& mode, const ThetaModel& model,
    double tol, std::vector<double>* wit_out = nullptr) {
  const int n = kThetaScan;
  auto viol = [&](double theta) {
    return pose_violation(d, mode, model.at(theta), tol);
  };
  auto pred = [&](double theta) {
    return config_feasible(d, mode, model.at(theta), tol);
  };
  const double step = 2.0 * kPi / n;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = viol(-kPi + step * i);
  return rescue_runs_grid(grid, -kPi, step, true, -2.0 * kPi, 2.0 * kPi, viol,
                          pred, wit_out);
}

void fill_reps_theta(ModeBranch& b) {
  b.reps.clear();
  for (int k = 0; k < kBranchReps; ++k) {
    double f = (k + 0.5) / kBranchReps;
    double theta = b.theta_lo + f * (b.theta_hi - b.theta_lo);
    b.reps.push_back(b.model.at(theta));
  }
}

// Feasible tau window on a fixed-theta slide, intersected over the mode's
// contacts, then trimmed by the penetration predicate.
std::vector<std::pair<double, double>> slide_windows(
    const JointDesign& d, const ContactMode& mode,
    const std::vector<PairRow>& rows, double theta, double tol,
    Vec2* base_out, Vec2* dir_out) {
  const PairRow& r0 = rows[0];
  Vec2 n = r0.n;
  Vec2 dir = r0.seg.direction();
  Vec2 base = n * rhs_at(r0, theta);
  double lo = -1e300, hi = 1e300;
  for (size_t k = 0; k < rows.size(); ++k) {
    const PairRow& r = rows[k];
    Vec2 w0 = rotated(r.c, theta) + base;
    double p0 = dot(w0 - r.seg.a, dir);
    lo = std::max(lo, -p0);
    hi = std::min(hi, r.seg.length() - p0);
  }
  std::vector<std::pair<double, double>> out;
  if (hi < lo - tol) return out;
  if (hi < lo) hi = lo;
  auto pred = [&](double tau) {
    Config q{base + dir * tau, theta};
    return config_feasible(d, mode, q, tol);
  };
  out = scan_runs(lo, hi, 33, pred);
  if (out.empty() && hi > lo) {
    // clearance pockets thinner than the sample spacing
    auto viol = [&](double tau) {
      return pose_violation(d, mode, {base + dir * tau, theta}, tol);
    };
    const int n = 33;
    const double step = (hi - lo) / (n - 1);
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = viol(lo + step * i);
    out = rescue_runs_grid(grid, lo, step, false, lo, hi, viol, pred);
  }
  if (base_out) *base_out = base;
  if (dir_out) *dir_out = dir;
  return out;
}

// Translation curve satisfying two line constraints at once; false when the
// normals are parallel (same-line contacts).
bool theta_model_for(const PairRow& ra, const PairRow& rb, ThetaModel* out) {
  double det = cross(ra.n, rb.n);
  if (std::abs(det) < 1e-12) return false;
  auto inv_mul = [&](double u, double v) {
    return Vec2{(rb.n.y * u - ra.n.y * v) / det,
                (-rb.n.x * u + ra.n.x * v) / det};
  };
  out->t0 = inv_mul(ra.off, rb.off);
  out->t1 = inv_mul(-ra.alpha, -rb.alpha);
  out->t2 = inv_mul(-ra.beta, -rb.beta);
  return true;
}

struct PivotRescue {
  std::vector<std::pair<double, double>> runs;
  std::vector<std::optional<Config>> wit;  // aligned with runs
};

// A single-contact pocket the coarse scan misses is pinched by a second
// contact about to activate, so its boundary poses realize a two-contact
// supermode. Collect poses from every supermode's own solution, keep the
// ones feasible for this mode, and grow theta windows around them.
PivotRescue rescue_pivot_runs(const JointDesign& d, const ContactMode& mode,
                              const std::vector<PairRow>& rows, double tol) {
  PivotRescue out;
  std::vector<Config> seeds;
  auto try_seed = [&](const Config& q) {
    if (config_feasible(d, mode, q, tol))
      seeds.push_back({q.translation, normalize_angle(q.rotation)});
  };
  const PairRef own = mode[0];
  for (int i = 0; i < d.point_count(); ++i) {
    for (int j = 0; j < d.edge_count(); ++j) {
      PairRef extra{i, j};
      if (extra == own) continue;
      ContactMode super = mode_with(mode, extra);
      PairRow r1 = make_row(d, extra);
      ThetaModel model;
      if (theta_model_for(rows[0], r1, &model)) {
        auto ok = [&](double theta) {
          return config_feasible(d, super, model.at(theta), tol);
        };
        auto runs = scan_runs_circular(ok);
        if (runs.empty()) {
          std::vector<double> wits;
          rescue_theta_runs(d, super, model, tol, &wits);
          for (double w : wits) try_seed(model.at(w));
        }
        for (auto [a, b] : runs)
          for (int k = 0; k < 5; ++k)
            try_seed(model.at(a + (b - a) * k / 4.0));
      } else if (extra.edge == own.edge) {
        // same line pins theta to the two roots aligning the chord
        double B = r1.alpha - rows[0].alpha, C = r1.beta - rows[0].beta;
        if (std::hypot(B, C) < 1e-14) continue;
        double phi = std::atan2(C, B);
        std::vector<PairRow> rr = {rows[0], r1};
        for (double delta : {0.5 * kPi, -0.5 * kPi}) {
          double theta = normalize_angle(phi + delta);
          Vec2 base, dirv;
          for (auto [a, b] :
               slide_windows(d, super, rr, theta, tol, &base, &dirv))
            for (int k = 0; k < 5; ++k)
              try_seed({base + dirv * (a + (b - a) * k / 4.0), theta});
        }
      }
    }
  }
  if (seeds.empty()) return out;

  std::sort(seeds.begin(), seeds.end(), [](const Config& a, const Config& b) {
    return a.rotation < b.rotation;
  });
  const double step = 2.0 * kPi / kThetaScan;
  auto pred = [&](double theta) {
    return !slide_windows(d, mode, rows, theta, tol, nullptr, nullptr).empty();
  };
  auto refine = [&](double bad, double good) {
    for (int it = 0; it < 40; ++it) {
      double mid = 0.5 * (bad + good);
      if (mid == bad || mid == good) break;
      (pred(mid) ? good : bad) = mid;
    }
    return good;
  };
  double covered_hi = -1e300;
  for (const Config& s : seeds) {
    if (s.rotation <= covered_hi) continue;  // same pocket as the last seed
    if (!pred(s.rotation)) {
      // knife-edge seed: keep a zero-width run with the witness pose
      out.runs.push_back({s.rotation, s.rotation});
      out.wit.push_back(s);
      covered_hi = s.rotation;
      continue;
    }
    double a = s.rotation, b = s.rotation;
    int guard = 0;
    while (guard++ < kThetaScan && pred(a - step)) a -= step;
    a = guard > kThetaScan ? -kPi : refine(a - step, a);
    guard = 0;
    while (guard++ < kThetaScan && pred(b + step)) b += step;
    b = guard > kThetaScan ? kPi : refine(b + step, b);
    out.runs.push_back({a, b});
    out.wit.push_back(std::nullopt);
    covered_hi = b;
  }
  return out;
}

// Same backstop for a one-parameter translation curve: seed from one-larger
// supermodes, then grow feasibility windows along the curve.
std::vector<std::pair<double, double>> rescue_curve_super(
    const JointDesign& d, const ContactMode& mode, const ThetaModel& model,
    double tol, std::vector<double>* wit_out = nullptr) {
  std::vector<double> seeds;
  auto pred = [&](double theta) {
    return config_feasible(d, mode, model.at(theta), tol);
  };
  auto try_seed = [&](const Config& q) {
    double theta = normalize_angle(q.rotation);
    if (config_feasible(d, mode, q, tol) && pred(theta))
      seeds.push_back(theta);
  };
  for (int i = 0; i < d.point_count(); ++i) {
    for (int j = 0; j < d.edge_count(); ++j) {
      PairRef extra{i, j};
      if (mode_contains(mode, extra)) continue;
      ModeSolution s = solve_mode(d, mode_with(mode, extra));
      for (const ModeBranch& b : s.branches) {
        if (b.kind == ModeBranch::Kind::Isolated) try_seed(b.config);
        for (const Config& q : b.reps) try_seed(q);
      }
    }
  }
  std::vector<std::pair<double, double>> runs;
  if (seeds.empty()) return runs;
  std::sort(seeds.begin(), seeds.end());
  const double step = 2.0 * kPi / kThetaScan;
  auto refine = [&](double bad, double good) {
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (bad + good);
      if (mid == bad || mid == good) break;
      (pred(mid) ? good : bad) = mid;
    }
    return good;
  };
  double covered_hi = -1e300;
  for (double s : seeds) {
    if (s <= covered_hi) continue;
    double a = s, b = s;
    int guard = 0;
    while (guard++ < kThetaScan && pred(a - step)) a -= step;
    a = guard > kThetaScan ? -kPi : refine(a - step, a);
    guard = 0;
    while (guard++ < kThetaScan && pred(b + step)) b += step;
    b = guard > kThetaScan ? kPi : refine(b + step, b);
    runs.push_back({a, b});
    if (wit_out) wit_out->push_back(s);
    covered_hi = b;
  }
  return runs;
}

}  // namespace

ModeSolution solve_mode(const JointDesign& d, const ContactMode& mode) {
  ModeSolution sol;
  const double tol = contact_tol(d);
  const int K = static_cast<int>(mode.size());

  if (K == 0) {
    ModeBranch b;
    b.kind = ModeBranch::Kind::Free;
    b.dof = 3;
    b.theta_lo = -kPi;
    b.theta_hi = kPi;
    sol.dof = 3;
    sol.branches.push_back(std::move(b));
    return sol;
  }

  std::vector<PairRow> rows;
  rows.reserve(mode.size());
  for (const PairRef& p : mode) {
    if (p.point < 0 || p.point >= d.point_count() || p.edge < 0 ||
        p.edge >= d.edge_count())
      throw std::out_of_range("mode pair index out of range");
    rows.push_back(make_row(d, p));
  }

  if (K == 1) {
    const PairRow& r0 = rows[0];
    Vec2 dir0 = r0.seg.direction();
    auto theta_ok = [&](double theta) {
      Vec2 base = r0.n * rhs_at(r0, theta);
      double p0 = dot(rotated(r0.c, theta) + base - r0.seg.a, dir0);
      double lo = -p0, hi = r0.seg.length() - p0;
      if (hi < lo) return false;
      for (int k = 0; k < 13; ++k) {
        double tau = lo + (k + 0.5) / 13.0 * (hi - lo);
        if (config_feasible(d, mode, {base + dir0 * tau, theta}, tol))
          return true;
      }
      return false;
    };
    auto runs = scan_runs_circular(theta_ok);
    std::vector<std::optional<Config>> wit;
    if (runs.empty()) {
      PivotRescue pr = rescue_pivot_runs(d, mode, rows, tol);
      runs = std::move(pr.runs);
      wit = std::move(pr.wit);
    }
    for (size_t ri = 0; ri < runs.size(); ++ri) {
      auto [lo, hi] = runs[ri];
      ModeBranch b;
      b.kind = ModeBranch::Kind::PivotSlide;
      b.dof = 2;
      b.theta_lo = lo;
      b.theta_hi = hi;
      for (int k = 0; k < kBranchReps; ++k) {
        double f = (k + 0.5) / kBranchReps;
        double theta = lo + f * (hi - lo);
        Vec2 base;
        Vec2 dir;
        auto wins = slide_windows(d, mode, rows, theta, tol, &base, &dir);
        if (wins.empty()) continue;
        auto [a, c] = wins[wins.size() / 2];
        b.reps.push_back({base + dir * (0.5 * (a + c)), theta});
      }
      if (b.reps.empty() && ri < wit.size() && wit[ri])
        b.reps.push_back(*wit[ri]);
      if (!b.reps.empty()) sol.branches.push_back(std::move(b));
    }
    sol.dof = sol.branches.empty() ? -1 : 2;
    return sol;
  }

  // pick the best-conditioned pair of rows
  int bi = -1, bj = -1;
  double best = 0.0;
  for (int a = 0; a < K; ++a)
    for (int b2 = a + 1; b2 < K; ++b2) {
      double c = std::abs(cross(rows[a].n, rows[b2].n));
      if (c > best) {
        best = c;
        bi = a;
        bj = b2;
      }
    }

  if (best < 1e-12) {
    // all contacts on one edge line: tilt is pinned to discrete roots
    std::vector<double> roots;
    for (int k = 1; k < K; ++k) {
      double B = rows[k].alpha - rows[0].alpha;
      double C = rows[k].beta - rows[0].beta;
      double R = std::hypot(B, C);
      if (R < 1e-14) continue;
      double phi = std::atan2(C, B);
      for (double delta : {0.5 * kPi, -0.5 * kPi}) {
        double theta = normalize_angle(phi + delta);
        bool consistent = true;
        for (int k2 = 1; k2 < K && consistent; ++k2) {
          double g = (rows[k2].alpha - rows[0].alpha) * std::cos(theta) +
                     (rows[k2].beta - rows[0].beta) * std::sin(theta);
          consistent = std::abs(g) <= 1e-8;
        }
        if (consistent) roots.push_back(theta);
      }
      break;
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) {
                              return std::abs(normalize_angle(a - b)) < 1e-9;
                            }),
                roots.end());
    for (double theta : roots) {
      Vec2 base;
      Vec2 dir;
      auto wins = slide_windows(d, mode, rows, theta, tol, &base, &dir);
      for (auto [a, c] : wins) {
        ModeBranch b;
        b.kind = ModeBranch::Kind::Slide;
        b.dof = 1;
        b.theta_fixed = theta;
        b.theta_lo = theta;
        b.theta_hi = theta;
        b.slide_base = base;
        b.slide_dir = dir;
        b.tau_lo = a;
        b.tau_hi = c;
        for (int k = 0; k < kBranchReps; ++k) {
          double f = (k + 0.5) / kBranchReps;
          b.reps.push_back({base + dir * (a + f * (c - a)), theta});
        }
        sol.branches.push_back(std::move(b));
      }
    }
    sol.dof = sol.branches.empty() ? -1 : 1;
    return sol;
  }

  // rank 2: closed-form translation against the chosen row pair
  const PairRow& rp = rows[bi];
  const PairRow& rq = rows[bj];
  double det = cross(rp.n, rq.n);
  auto inv_mul = [&](double u, double v) {
    return Vec2{(rq.n.y * u - rp.n.y * v) / det,
                (-rq.n.x * u + rp.n.x * v) / det};
  };
  ThetaModel model;
  model.t0 = inv_mul(rp.off, rq.off);
  model.t1 = inv_mul(-rp.alpha, -rq.alpha);
  model.t2 = inv_mul(-rp.beta, -rq.beta);

  struct Residual {
    double A, B, C;
  };
  std::vector<Residual> res;
  for (int k = 0; k < K; ++k) {
    if (k == bi || k == bj) continue;
    const PairRow& r = rows[k];
    Residual g{dot(r.n, model.t0) - r.off, dot(r.n, model.t1) + r.alpha,
               dot(r.n, model.t2) + r.beta};
    if (std::abs(g.A) > 1e-12 || std::abs(g.B) > 1e-12 ||
        std::abs(g.C) > 1e-12)
      res.push_back(g);
  }

  if (res.empty()) {
    // one-parameter curve of poses
    auto ok = [&](double theta) {
      return config_feasible(d, mode, model.at(theta), tol);
    };
    auto runs = scan_runs_circular(ok);
    std::vector<double> wits;
    if (runs.empty()) runs = rescue_theta_runs(d, mode, model, tol, &wits);
    // one-larger supermodes solve without re-entering this path, so the
    // recursion bottoms out after a single level
    if (runs.empty() && K == 2)
      runs = rescue_curve_super(d, mode, model, tol, &wits);
    for (size_t ri = 0; ri < runs.size(); ++ri) {
      auto [lo, hi] = runs[ri];
      ModeBranch b;
      b.kind = ModeBranch::Kind::ThetaCurve;
      b.dof = 1;
      b.theta_lo = lo;
      b.theta_hi = hi;
      b.model = model;
      fill_reps_theta(b);
      if (ri < wits.size()) {
        // rescued windows are thin; drop reps the curve pushes infeasible
        std::erase_if(b.reps, [&](const Config& q) {
          return !config_feasible(d, mode, q, tol);
        });
        if (b.reps.empty()) b.reps.push_back(model.at(wits[ri]));
      }
      sol.branches.push_back(std::move(b));
    }
    sol.dof = sol.branches.empty() ? -1 : 1;
    return sol;
  }

  // isolated roots: solve the first residual, polish on all of them
  std::vector<double> cands;
  {
    const Residual& g = res[0];
    double R = std::hypot(g.B, g.C);
    if (R >= 1e-14) {
      double ratio = -g.A / R;
      if (std::abs(ratio) <= 1.0 + 1e-9) {
        ratio = std::clamp(ratio, -1.0, 1.0);
        double phi = std::atan2(g.C, g.B);
        double delta = std::acos(ratio);
        cands.push_back(normalize_angle(phi + delta));
        cands.push_back(normalize_angle(phi - delta));
      }
    }
  }
  std::vector<double> roots;
  for (double theta : cands) {
    for (int it = 0; it < 40; ++it) {
      double num = 0.0, den = 0.0;
      for (const Residual& g : res) {
        double gv = g.A + g.B * std::cos(theta) + g.C * std::sin(theta);
        double gp = -g.B * std::sin(theta) + g.C * std::cos(theta);
        num += gv * gp;
        den += gp * gp;
      }
      if (den < 1e-18) break;
      double step = num / den;
      theta -= step;
      if (std::abs(step) < 1e-13) break;
    }
    theta = normalize_angle(theta);
    bool satisfied = true;
    for (const Residual& g : res) {
      double gv = g.A + g.B * std::cos(theta) + g.C * std::sin(theta);
      if (std::abs(gv) > 1e-8) satisfied = false;
    }
    if (satisfied) roots.push_back(theta);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) {
                            return std::abs(normalize_angle(a - b)) < 1e-9;
                          }),
              roots.end());

  for (double theta : roots) {
    Config q = model.at(theta);
    if (!config_feasible(d, mode, q, tol)) continue;
    ModeBranch b;
    b.kind = ModeBranch::Kind::Isolated;
    b.dof = 0;
    b.config = q;
    b.theta_lo = theta;
    b.theta_hi = theta;
    b.reps.push_back(q);
    sol.branches.push_back(std::move(b));
  }
  sol.dof = sol.branches.empty() ? -1 : 0;
  return sol;
}

}  // namespace jointgen
