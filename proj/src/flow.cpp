#include "fppcut/flow.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace fppcut {

long long uncuttable_capacity(const std::vector<long long>& cap) {
  long long s = 1;
  for (long long c : cap) s += c;
  return s;
}

namespace {

// Highest-label push-relabel on flat CSR arrays.  Arcs live in
// mutual-reverse pairs, so the reverse of arc a is a ^ 1; undirected
// lattice edges become one pair with cap c on both sides, keeping
// residuals consistent.  Heights start at exact distances to the sink
// and the gap heuristic retires unreachable levels.  Discharging runs
// until no excess remains anywhere, so the result is a genuine maximum
// flow, not a preflow: trapped excess drains back once a node's height
// passes the source's.  Everything is raw arrays because the Monte
// Carlo loops rebuild the network once per replicate.
struct PushRelabel {
  int32_t nodes = 0;
  int32_t narcs = 0;
  std::vector<int32_t> head;   // narcs: arc target
  std::vector<long long> cap;  // narcs: residual capacity
  std::vector<int32_t> off;    // nodes+1: CSR offsets into arc_id
  std::vector<int32_t> arc_id; // narcs: arcs grouped by tail, id ascending
  std::vector<int32_t> tails;  // arc tails, only needed until finalize()
  std::vector<long long> ex;   // excess
  std::vector<int32_t> h, cur, q, cnt;
  std::vector<std::vector<int32_t>> act; // active nodes bucketed by height

  PushRelabel(int32_t nodes_, int32_t npairs) : nodes(nodes_) {
    head.reserve(2 * (size_t)npairs);
    cap.reserve(2 * (size_t)npairs);
    tails.reserve(2 * (size_t)npairs);
  }

  void add_pair(int32_t u, int32_t v, long long cap_uv, long long cap_vu) {
    head.push_back(v);
    cap.push_back(cap_uv);
    tails.push_back(u);
    head.push_back(u);
    cap.push_back(cap_vu);
    tails.push_back(v);
  }

  // counting sort of arcs by tail; per node the ids stay ascending
  void finalize() {
    narcs = (int32_t)head.size();
    off.assign((size_t)nodes + 1, 0);
    for (int32_t t : tails) ++off[(size_t)t + 1];
    for (int32_t v = 0; v < nodes; ++v) off[(size_t)v + 1] += off[v];
    arc_id.resize((size_t)narcs);
    std::vector<int32_t> pos(off.begin(), off.end() - 1);
    for (int32_t a = 0; a < narcs; ++a) arc_id[(size_t)pos[tails[(size_t)a]]++] = a;
    q.resize((size_t)nodes);
  }

  void activate(int32_t v, int32_t& hi) {
    act[(size_t)h[v]].push_back(v);
    hi = std::max(hi, h[v]);
  }

  // exact height initialization: h[v] = residual distance to t
  void reverse_bfs(int32_t s, int32_t t) {
    h.assign((size_t)nodes, nodes);
    int32_t qh = 0, qt = 0;
    h[t] = 0;
    q[qt++] = t;
    while (qh < qt) {
      int32_t v = q[qh++];
      for (int32_t i = off[v]; i < off[(size_t)v + 1]; ++i) {
        int32_t a = arc_id[i];
        int32_t u = head[a];
        // u reaches v through the reverse arc of a
        if (cap[a ^ 1] > 0 && h[u] == nodes && u != s) {
          h[u] = h[v] + 1;
          q[qt++] = u;
        }
      }
    }
    h[s] = nodes;
  }

  // empty level g below the source height: nothing above it can reach
  // the sink any more, so lift the stranded band straight past s.
  // Lifted nodes still holding excess are re-activated at the new
  // height; their old queue entries go stale and get skipped.
  void apply_gap(int32_t g, int32_t s, int32_t t, int32_t& hi) {
    for (int32_t v = 0; v < nodes; ++v)
      if (h[v] > g && h[v] < nodes) {
        --cnt[(size_t)h[v]];
        h[v] = nodes + 1;
        ++cnt[(size_t)h[v]];
        cur[v] = off[v];
        if (ex[v] > 0 && v != s && v != t) activate(v, hi);
      }
  }

  long long run(int32_t s, int32_t t) {
    const int32_t hcap = 2 * nodes + 1;
    reverse_bfs(s, t);
    ex.assign((size_t)nodes, 0);
    cur.assign(off.begin(), off.end() - 1);
    cnt.assign((size_t)hcap + 1, 0);
    for (int32_t v = 0; v < nodes; ++v) ++cnt[(size_t)h[v]];
    act.assign((size_t)hcap + 1, {});
    int32_t hi = 0;

    for (int32_t i = off[s]; i < off[(size_t)s + 1]; ++i) {
      int32_t a = arc_id[i];
      if (cap[a] <= 0) continue;
      int32_t v = head[a];
      long long d = cap[a];
      cap[a] = 0;
      cap[a ^ 1] += d;
      ex[v] += d;
      if (v != s && v != t && ex[v] == d) activate(v, hi);
    }

    while (hi >= 0) {
      if (act[(size_t)hi].empty()) {
        --hi;
        continue;
      }
      int32_t v = act[(size_t)hi].back();
      act[(size_t)hi].pop_back();
      if (v == s || v == t || ex[v] == 0 || h[v] != hi) continue; // stale
      // discharge v completely
      while (ex[v] > 0) {
        if (cur[v] == off[(size_t)v + 1]) {
          // relabel: one past the lowest admissible neighbor
          int32_t old = h[v], best = hcap;
          for (int32_t i = off[v]; i < off[(size_t)v + 1]; ++i) {
            int32_t a = arc_id[i];
            if (cap[a] > 0) best = std::min(best, h[head[a]] + 1);
          }
          --cnt[(size_t)old];
          h[v] = best;
          ++cnt[(size_t)h[v]];
          cur[v] = off[v];
          if (cnt[(size_t)old] == 0 && old < nodes) apply_gap(old, s, t, hi);
          if (h[v] >= hcap) break; // isolated from both terminals
          continue;
        }
        int32_t a = arc_id[(size_t)cur[v]];
        int32_t u = head[a];
        if (cap[a] > 0 && h[v] == h[u] + 1) {
          long long d = std::min(ex[v], cap[a]);
          cap[a] -= d;
          cap[a ^ 1] += d;
          ex[v] -= d;
          ex[u] += d;
          if (u != s && u != t && ex[u] == d) activate(u, hi);
        } else {
          ++cur[v];
        }
      }
    }
    return ex[t];
  }

  std::vector<uint8_t> residual_reach(int32_t s) {
    std::vector<uint8_t> seen((size_t)nodes, 0);
    int32_t qh = 0, qt = 0;
    seen[s] = 1;
    q[qt++] = s;
    while (qh < qt) {
      int32_t u = q[qh++];
      for (int32_t i = off[u]; i < off[(size_t)u + 1]; ++i) {
        int32_t a = arc_id[i];
        int32_t v = head[a];
        if (cap[a] > 0 && !seen[v]) {
          seen[v] = 1;
          q[qt++] = v;
        }
      }
    }
    return seen;
  }
};

void check_terminals(const LatticeGraph& g, const std::vector<int32_t>& sources,
                     const std::vector<int32_t>& sinks) {
  if (sources.empty() || sinks.empty())
    throw ConfigError("flow: sources and sinks must be nonempty");
  for (int32_t v : sources)
    if (v < 0 || v >= (int32_t)g.verts.size()) throw ConfigError("flow: bad source index");
  for (int32_t v : sinks)
    if (v < 0 || v >= (int32_t)g.verts.size()) throw ConfigError("flow: bad sink index");
  std::vector<int32_t> a = sources, b = sinks, inter;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(inter));
  if (!inter.empty())
    throw ConfigError("flow: sources and sinks intersect (vertex " +
                      std::to_string(inter[0]) + ")");
}

} // namespace

FlowResult max_flow(const LatticeGraph& g, const std::vector<long long>& cap,
                    const std::vector<int32_t>& sources,
                    const std::vector<int32_t>& sinks) {
  check_terminals(g, sources, sinks);
  if (cap.size() != g.edges.size()) throw ConfigError("flow: capacity vector size mismatch");
  const size_t V = g.verts.size();
  const int32_t S = (int32_t)V, T = (int32_t)V + 1;
  PushRelabel din((int32_t)V + 2,
            (int32_t)(g.edges.size() + sources.size() + sinks.size()));
  // lattice edges first, so edge i owns the arc pair (2i, 2i+1)
  for (size_t i = 0; i < g.edges.size(); ++i)
    din.add_pair(g.edges[i].u, g.edges[i].v, cap[i], cap[i]);
  const long long inf = uncuttable_capacity(cap);
  for (int32_t s : sources) din.add_pair(S, s, inf, 0);
  for (int32_t t : sinks) din.add_pair(t, T, inf, 0);
  din.finalize();

  FlowResult res;
  res.value_int = din.run(S, T);

  std::vector<uint8_t> reach = din.residual_reach(S);
  res.mincut.source_side.clear();
  for (int32_t v = 0; v < (int32_t)V; ++v)
    if (reach[v]) res.mincut.source_side.push_back(v);
  long long cut_val = 0;
  for (size_t i = 0; i < g.edges.size(); ++i)
    if (reach[g.edges[i].u] != reach[g.edges[i].v]) {
      res.mincut.edges.push_back((int32_t)i);
      cut_val += cap[i];
    }
  res.mincut.value_int = cut_val;
  invariant(cut_val == res.value_int,
            "duality gap: max flow " + std::to_string(res.value_int) +
                " != min cut " + std::to_string(cut_val));

  // recover net flow per undirected edge: pair (2i, 2i+1) started at
  // (cap, cap) and now holds (cap - f, cap + f)
  res.edge_flow.resize(g.edges.size());
  for (size_t i = 0; i < g.edges.size(); ++i)
    res.edge_flow[i] = (din.cap[2 * i + 1] - din.cap[2 * i]) / 2;
  return res;
}

std::vector<int32_t> reachable_from(const LatticeGraph& g,
                                    const std::vector<int32_t>& start,
                                    const std::vector<int32_t>& banned) {
  std::vector<uint8_t> edge_ok(g.edges.size(), 1);
  for (int32_t e : banned) edge_ok[e] = 0;
  std::vector<uint8_t> seen(g.verts.size(), 0);
  std::vector<int32_t> stack;
  for (int32_t v : start)
    if (!seen[v]) {
      seen[v] = 1;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    int32_t u = stack.back();
    stack.pop_back();
    for (int32_t k = g.adj_off[u]; k < g.adj_off[u + 1]; ++k) {
      int32_t e = g.adj_edge[k];
      if (!edge_ok[e]) continue;
      int32_t w = g.other_end(e, u);
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  std::vector<int32_t> out;
  for (int32_t v = 0; v < (int32_t)g.verts.size(); ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

bool is_cutset(const LatticeGraph& g, const std::vector<int32_t>& cut,
               const std::vector<int32_t>& sources, const std::vector<int32_t>& sinks) {
  check_terminals(g, sources, sinks);
  std::vector<int32_t> reach = reachable_from(g, sources, cut);
  std::vector<int32_t> b = sinks;
  std::sort(b.begin(), b.end());
  for (int32_t v : reach)
    if (std::binary_search(b.begin(), b.end(), v)) return false;
  return true;
}

bool is_epsilon_cutset(const LatticeGraph& g, const CapacityField& field,
                       const std::vector<int32_t>& cut,
                       const std::vector<int32_t>& sources,
                       const std::vector<int32_t>& sinks, double eps,
                       long long phi_int) {
  if (eps < 0) throw ConfigError("is_epsilon_cutset: eps must be >= 0");
  if (!is_cutset(g, cut, sources, sinks))
    throw ConfigError("is_epsilon_cutset: input is not a cutset");
  long long v = 0;
  for (int32_t e : cut) v += field.cap[e];
  double slack = eps * std::pow((double)g.n, g.d - 1) * (double)field.D;
  return (double)(v - phi_int) <= slack;
}

std::vector<int32_t> edge_boundary(const LatticeGraph& g,
                                   const std::vector<int32_t>& verts) {
  std::vector<uint8_t> in(g.verts.size(), 0);
  for (int32_t v : verts) {
    if (v < 0 || v >= (int32_t)g.verts.size())
      throw ConfigError("edge_boundary: bad vertex index");
    in[v] = 1;
  }
  std::vector<int32_t> out;
  for (int32_t e = 0; e < (int32_t)g.edges.size(); ++e)
    if (in[g.edges[e].u] != in[g.edges[e].v]) out.push_back(e);
  return out;
}

CutSet brute_force_min_cut(const LatticeGraph& g, const std::vector<long long>& cap,
                           const std::vector<int32_t>& sources,
                           const std::vector<int32_t>& sinks) {
  check_terminals(g, sources, sinks);
  const int E = (int)g.edges.size();
  if (E > 22) throw CapacityError("brute_force_min_cut: more than 22 edges");
  if (g.verts.size() > 64) throw CapacityError("brute_force_min_cut: more than 64 vertices");

  uint64_t src_mask = 0, sink_mask = 0;
  for (int32_t v : sources) src_mask |= 1ULL << v;
  for (int32_t v : sinks) sink_mask |= 1ULL << v;

  // connectivity over the kept edges via bitmask fixpoint
  auto separated = [&](uint32_t cut_mask) {
    uint64_t reach = src_mask;
    while (true) {
      uint64_t nxt = reach;
      for (int e = 0; e < E; ++e) {
        if (cut_mask & (1u << e)) continue;
        uint64_t bu = 1ULL << g.edges[e].u, bv = 1ULL << g.edges[e].v;
        if (nxt & bu) nxt |= bv;
        if (nxt & bv) nxt |= bu;
      }
      if (nxt & sink_mask) return false;
      if (nxt == reach) return true;
      reach = nxt;
    }
  };

  long long best_val = 0;
  for (long long c : cap) best_val += c;
  uint32_t best_mask = (E == 32) ? 0xFFFFFFFFu : ((1u << E) - 1); // cut everything
  auto lex_less = [&](uint32_t a, uint32_t b) {
    // compare ascending edge-index lists lexicographically
    while (a || b) {
      if (!a) return true;  // proper prefix
      if (!b) return false;
      int ea = __builtin_ctz(a), eb = __builtin_ctz(b);
      if (ea != eb) return ea < eb;
      a &= a - 1;
      b &= b - 1;
    }
    return false;
  };
  for (uint32_t mask = 0; mask < (1u << E); ++mask) {
    long long v = 0;
    for (uint32_t m = mask; m; m &= m - 1) v += cap[__builtin_ctz(m)];
    if (v > best_val) continue;
    if (v == best_val && !lex_less(mask, best_mask)) continue;
    if (!separated(mask)) continue;
    best_val = v;
    best_mask = mask;
  }
  CutSet cut;
  cut.value_int = best_val;
  for (uint32_t m = best_mask; m; m &= m - 1) cut.edges.push_back(__builtin_ctz(m));
  std::vector<int32_t> reach = reachable_from(g, sources, cut.edges);
  cut.source_side = reach;
  return cut;
}

long long min_cardinality_cut(const LatticeGraph& g,
                              const std::vector<int32_t>& sources,
                              const std::vector<int32_t>& sinks) {
  std::vector<long long> unit(g.edges.size(), 1);
  return max_flow(g, unit, sources, sinks).value_int;
}

} // namespace fppcut
