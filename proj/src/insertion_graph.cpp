#include "jointgen/insertion_graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace jointgen {

int InsertionGraph::node_id(const ContactMode& m) const {
  auto it = index.find(m);
  return it == index.end() ? -1 : it->second;
}

std::vector<ContactMode> goal_modes_at(const JointDesign& scaled) {
  const auto& pairs = scaled.correspondence.pairs;
  const int k = static_cast<int>(pairs.size());
  std::vector<ContactMode> realizable;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    ContactMode m;
    for (int b = 0; b < k; ++b)
      if (mask & (1u << b)) m.push_back(pairs[b]);
    m = normalize_mode(std::move(m));
    if (solve_mode(scaled, m).realizable()) realizable.push_back(m);
  }
  std::vector<ContactMode> maximal;
  for (const ContactMode& m : realizable) {
    bool dominated = false;
    for (const ContactMode& s : realizable)
      if (s.size() > m.size() && mode_subset(m, s)) {
        dominated = true;
        break;
      }
    if (!dominated) maximal.push_back(m);
  }
  std::sort(maximal.begin(), maximal.end());
  return maximal;
}

namespace {

struct ProbeOutcome {
  bool rested = false;
  bool changed = false;
  ContactMode target;
  Config end;
};

// Follows the quasi-static motion law from q0 while the contact mode stays
// fixed; stops at rest or at the first mode change.
ProbeOutcome probe(const JointDesign& d, const ContactMode& mode, Config q0,
                   const Metric& M, const GraphParams& p) {
  ProbeOutcome out;
  const double ctol = contact_tol(d);
  const double step = p.micro_step_frac * d.socket.mouth_width();

  ContactMode first = classify_config(d, q0, ctol);
  if (first != mode && mode_subset(mode, first)) {
    out.changed = true;
    out.target = first;
    out.end = q0;
    return out;
  }

  Config q = q0;
  for (int it = 0; it < p.max_micro_steps; ++it) {
    Vec3 w = insertion_wrench(d, q);
    auto rows = support_rows(d, q, mode, ctol);
    MotionResult mr = best_motion(w, rows, {}, M);
    double eq_tol = rest_power_tol(w, M);
    if (mr.power <= eq_tol) {
      out.rested = true;
      out.end = q;
      return out;
    }
    bool marginal = mr.power <= eq_tol * kMarginalBand;
    if (marginal) out.rested = true;

    double speed = std::sqrt(std::max(M.quad(mr.u), 1e-300));
    Vec3 u = mr.u * (1.0 / speed);

    // contacts with positive separation rate leave the mode immediately
    auto crows = contact_rows(d, q, mode);
    ContactMode staying;
    for (size_t k = 0; k < mode.size(); ++k)
      if (dot(crows[k], u) <= 1e-7) staying.push_back(mode[k]);
    if (staying.size() != mode.size()) {
      out.changed = true;
      out.target = staying;
      out.end = q;
      return out;
    }

    auto place = [&](double s) {
      return project_to_mode(d, mode, screw_advance(q, u, s), M);
    };
    // Penetration slack stays below the classify band so a step can never
    // cross the band and still count as feasible.
    auto unchanged = [&](const Config& qq) {
      return config_feasible(d, mode, qq, kPenetrationTol) &&
             classify_config(d, qq, ctol) == mode;
    };
    Config q1 = place(step);
    if (unchanged(q1)) {
      q = q1;
      continue;
    }
    double lo = 0.0, hi = step;
    for (int b = 0; b < 50; ++b) {
      double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (unchanged(place(mid)) ? lo : hi) = mid;
    }
    Config qb = place(hi);
    ContactMode target = classify_config(d, qb, ctol);
    for (int tries = 0; tries < 6 && target == mode; ++tries) {
      hi += step * 1e-7 * (1 << tries);
      qb = place(hi);
      target = classify_config(d, qb, ctol);
    }
    if (target == mode) {
      q = place(lo);  // stay on the last good pose; lip rows may engage next
      continue;
    }
    out.changed = true;
    out.target = target;
    out.end = qb;
    return out;
  }
  out.end = q;
  return out;
}

// Edge chain with one pair changing at a time, additions first.
void add_chain(InsertionGraph& g, std::deque<ContactMode>& queue,
               const ContactMode& from, const ContactMode& to) {
  auto intern = [&](const ContactMode& m) {
    auto it = g.index.find(m);
    if (it != g.index.end()) return it->second;
    int id = static_cast<int>(g.modes.size());
    g.modes.push_back(m);
    g.index.emplace(m, id);
    g.out.emplace_back();
    g.rest.push_back(0);
    queue.push_back(m);
    return id;
  };
  ContactMode cur = from;
  int guard = 0;
  while (cur != to && guard++ < 32) {
    ContactMode next = cur;
    ContactMode add;
    for (const PairRef& p : to)
      if (!mode_contains(cur, p)) add.push_back(p);
    if (!add.empty()) {
      next = mode_with(cur, add.front());
    } else {
      for (const PairRef& p : cur)
        if (!mode_contains(to, p)) {
          next = mode_without(cur, p);
          break;
        }
    }
    int a = intern(cur);
    int b = intern(next);
    if (!std::count(g.out[a].begin(), g.out[a].end(), b)) g.out[a].push_back(b);
    cur = next;
  }
}

}  // namespace

InsertionGraph build_graph(const JointDesign& scaled, const ErrorModel& e,
                           const GraphParams& p) {
  InsertionGraph g;
  Metric M = peg_metric(scaled.peg);
  std::deque<ContactMode> queue;

  auto intern = [&](const ContactMode& m) {
    auto it = g.index.find(m);
    if (it != g.index.end()) return it->second;
    int id = static_cast<int>(g.modes.size());
    g.modes.push_back(m);
    g.index.emplace(m, id);
    g.out.emplace_back();
    g.rest.push_back(0);
    queue.push_back(m);
    return id;
  };

  g.empty_node = intern(ContactMode{});
  auto goals = goal_modes_at(scaled);
  for (const ContactMode& m : goals) g.goal_nodes.push_back(intern(m));
  // subsets of the correspondence seed the frontier as well
  {
    const auto& pairs = scaled.correspondence.pairs;
    int k = static_cast<int>(pairs.size());
    if (k <= 8)
      for (unsigned mask = 1; mask < (1u << k); ++mask) {
        ContactMode m;
        for (int b = 0; b < k; ++b)
          if (mask & (1u << b)) m.push_back(pairs[b]);
        m = normalize_mode(std::move(m));
        if (solve_mode(scaled, m).realizable()) intern(m);
      }
  }

  std::vector<int> probe_picks;
  for (int k = 0; k < kBranchReps; k += 4) probe_picks.push_back(k);

  while (!queue.empty() &&
         static_cast<int>(g.modes.size()) <= p.max_nodes) {
    ContactMode mode = queue.front();
    queue.pop_front();
    int id = g.index.at(mode);

    if (mode.empty()) {
      for (const Config& q0 : entry_poses(scaled, e, p.entry_grid)) {
        ProbeOutcome r = probe(scaled, mode, q0, M, p);
        if (r.rested) g.rest[id] = 1;
        if (r.changed) add_chain(g, queue, mode, r.target);
      }
      continue;
    }

    ModeSolution sol = solve_mode(scaled, mode);
    for (const ModeBranch& b : sol.branches) {
      std::vector<Config> starts;
      if (b.dof == 0) {
        starts = b.reps;
      } else {
        for (int k : probe_picks)
          if (k < static_cast<int>(b.reps.size())) starts.push_back(b.reps[k]);
      }
      for (const Config& q0 : starts) {
        ProbeOutcome r = probe(scaled, mode, q0, M, p);
        if (r.rested) g.rest[id] = 1;
        if (r.changed) add_chain(g, queue, mode, r.target);
      }
    }
  }

  // entry descents define the initial nodes
  g.initial_nodes.push_back(g.empty_node);
  for (int t : g.out[g.empty_node]) g.initial_nodes.push_back(t);
  std::sort(g.initial_nodes.begin(), g.initial_nodes.end());
  g.initial_nodes.erase(
      std::unique(g.initial_nodes.begin(), g.initial_nodes.end()),
      g.initial_nodes.end());
  for (auto& adj : g.out) std::sort(adj.begin(), adj.end());
  return g;
}

GraphAnalysis analyze_graph(const InsertionGraph& g) {
  GraphAnalysis a;
  const int n = static_cast<int>(g.modes.size());
  a.scc_of.assign(n, -1);

  // Tarjan, iterative
  std::vector<int> low(n, -1), num(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  int counter = 0;
  struct Frame {
    int v;
    size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    num[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.child < g.out[f.v].size()) {
        int w = g.out[f.v][f.child++];
        if (num[w] == -1) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], num[w]);
        }
      } else {
        if (low[f.v] == num[f.v]) {
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            a.scc_of[w] = a.scc_count;
          } while (w != f.v);
          ++a.scc_count;
        }
        int v = f.v;
        call.pop_back();
        if (!call.empty())
          low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }

  std::vector<char> has_out(a.scc_count, 0);
  for (int v = 0; v < n; ++v)
    for (int w : g.out[v])
      if (a.scc_of[v] != a.scc_of[w]) has_out[a.scc_of[v]] = 1;

  std::vector<char> goal_scc(a.scc_count, 0);
  for (int v : g.goal_nodes) goal_scc[a.scc_of[v]] = 1;

  std::vector<char> goal_sink(a.scc_count, 0);
  for (int s = 0; s < a.scc_count; ++s) {
    if (has_out[s]) continue;
    SinkInfo info;
    info.scc = s;
    info.goal = goal_scc[s];
    for (int v = 0; v < n; ++v)
      if (a.scc_of[v] == s) info.nodes.push_back(v);
    if (!info.goal) ++a.undesired_sinks;
    goal_sink[s] = info.goal;
    a.sinks.push_back(std::move(info));
  }

  // which sccs reach a goal sink
  std::vector<char> reaches(a.scc_count, 0);
  for (int s = 0; s < a.scc_count; ++s) reaches[s] = goal_sink[s];
  bool grew = true;
  while (grew) {
    grew = false;
    for (int v = 0; v < n; ++v)
      for (int w : g.out[v]) {
        int sv = a.scc_of[v], sw = a.scc_of[w];
        if (reaches[sw] && !reaches[sv]) {
          reaches[sv] = 1;
          grew = true;
        }
      }
  }
  for (int v : g.initial_nodes)
    if (!reaches[a.scc_of[v]]) a.trapped_initials.push_back(v);

  bool any_goal_sink =
      std::any_of(a.sinks.begin(), a.sinks.end(),
                  [](const SinkInfo& s) { return s.goal; });
  a.insertable = any_goal_sink && a.undesired_sinks == 0 &&
                 a.trapped_initials.empty();
  return a;
}

InsertionReport insertion_report(const JointDesign& d, const ErrorModel& e,
                                 const GraphParams& p) {
  InsertionReport rep;
  rep.insertable = true;
  for (double s : e.scale_extremes()) {
    ScaleReport sr;
    sr.scale = s;
    JointDesign scaled = scale_design(d, s);
    sr.goal_modes = goal_modes_at(scaled);
    sr.graph = build_graph(scaled, e, p);
    sr.analysis = analyze_graph(sr.graph);
    rep.insertable = rep.insertable && sr.analysis.insertable;
    rep.total_undesired += sr.analysis.undesired_sinks;
    rep.total_trapped +=
        static_cast<int>(sr.analysis.trapped_initials.size());
    rep.scales.push_back(std::move(sr));
  }
  return rep;
}

}  // namespace jointgen
