#include "fppcut/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace fppcut {

int32_t LatticeGraph::find_vertex(const IVec& z) const {
  auto it = std::lower_bound(verts.begin(), verts.end(), z);
  if (it == verts.end() || !(*it == z)) return -1;
  return (int32_t)(it - verts.begin());
}

Vec LatticeGraph::edge_center(int32_t e) const {
  const Edge& ed = edges[e];
  Vec c = Vec::zeros(d);
  for (int i = 0; i < d; ++i) c[i] = verts[ed.u].c[i] / (double)n;
  c[ed.axis] += 0.5 / n;
  return c;
}

// enumerate the integer box lex-ordered, keep members, wire up edges
static void build_graph(LatticeGraph& g, const IVec& lo, const IVec& hi,
                        const std::function<bool(const IVec&)>& member,
                        const Limits& lim) {
  const int d = g.d;
  IVec z = lo;
  bool done = false;
  for (int i = 0; i < d; ++i)
    if (lo.c[i] > hi.c[i]) done = true;
  while (!done) {
    if (member(z)) {
      g.verts.push_back(z);
      if ((long long)g.verts.size() > lim.max_edges)
        throw CapacityError("lattice exceeds the configured budget of " +
                            std::to_string(lim.max_edges) + " (vertices)");
    }
    int k = d - 1;
    while (k >= 0) {
      if (++z.c[k] <= hi.c[k]) break;
      z.c[k] = lo.c[k];
      --k;
    }
    if (k < 0) done = true;
  }
  // verts are lex-sorted by construction; edges come out sorted by
  // (base, axis), which is the canonical edge order everywhere
  for (int32_t ui = 0; ui < (int32_t)g.verts.size(); ++ui)
    for (int8_t a = 0; a < d; ++a) {
      IVec nb = ivec_shift(g.verts[ui], a, +1);
      int32_t vi = g.find_vertex(nb);
      if (vi >= 0) g.edges.push_back(Edge{ui, vi, a});
    }
  if ((long long)g.edges.size() > lim.max_edges)
    throw CapacityError("lattice exceeds the configured budget of " +
                        std::to_string(lim.max_edges) + " (edges: " +
                        std::to_string(g.edges.size()) + ")");
  g.adj_off.assign(g.verts.size() + 1, 0);
  for (const Edge& e : g.edges) {
    ++g.adj_off[e.u + 1];
    ++g.adj_off[e.v + 1];
  }
  for (size_t i = 1; i < g.adj_off.size(); ++i) g.adj_off[i] += g.adj_off[i - 1];
  g.adj_edge.assign(g.adj_off.back(), 0);
  std::vector<int32_t> fill(g.verts.size(), 0);
  for (int32_t ei = 0; ei < (int32_t)g.edges.size(); ++ei) {
    const Edge& e = g.edges[ei];
    g.adj_edge[g.adj_off[e.u] + fill[e.u]++] = ei;
    g.adj_edge[g.adj_off[e.v] + fill[e.v]++] = ei;
  }
}

// ------------------------------------------------------------- domains

LatticeDomain build_lattice(const DomainSpec& spec, int n, const Limits& lim) {
  if (n < 1) throw ConfigError("build_lattice: n must be >= 1");
  LatticeDomain L;
  L.spec = spec;
  L.g.d = spec.d;
  L.g.n = n;
  IVec lo, hi;
  spec.lattice_bounds(n, lo, hi);
  const Rat step(1, n);
  build_graph(L.g, lo, hi,
              [&](const IVec& z) { return spec.dist_below(z, n, step); }, lim);

  const auto& g = L.g;
  L.in_gamma1.assign(g.verts.size(), 0);
  L.in_gamma2.assign(g.verts.size(), 0);
  for (int32_t i = 0; i < (int32_t)g.verts.size(); ++i) {
    bool boundary = false;
    for (int a = 0; a < g.d && !boundary; ++a)
      for (int s = -1; s <= 1 && !boundary; s += 2)
        if (!g.has_vertex(ivec_shift(g.verts[i], a, s))) boundary = true;
    if (!boundary) continue;
    L.gamma.push_back(i);
    bool near1 = spec.patch_dist_below(g.verts[i], n, 1, step);
    bool near2 = spec.patch_dist_below(g.verts[i], n, 2, step);
    if (near1 && !near2) {
      L.gamma1.push_back(i);
      L.in_gamma1[i] = 1;
    } else if (near2 && !near1) {
      L.gamma2.push_back(i);
      L.in_gamma2[i] = 1;
    }
  }
  if (L.gamma1.empty() || L.gamma2.empty())
    throw ConfigError("degenerate discretization: empty Gamma_n^1 or Gamma_n^2 at n=" +
                      std::to_string(n));
  return L;
}

// ----------------------------------------------------------- cylinders

static std::vector<Vec> default_frame(const Vec& v) {
  // standard axes minus the dominant one, Gram-Schmidt against v
  int d = v.d, drop = 0;
  for (int i = 1; i < d; ++i)
    if (std::fabs(v[i]) > std::fabs(v[drop])) drop = i;
  std::vector<Vec> frame;
  for (int i = 0; i < d; ++i) {
    if (i == drop) continue;
    Vec u = Vec::axis(d, i);
    u = u - dot(u, v) * v;
    for (const Vec& w : frame) u = u - dot(u, w) * w;
    double nu = norm2(u);
    if (nu < 1e-9) throw ConfigError("cylinder: failed to build a frame for v");
    frame.push_back((1.0 / nu) * u);
  }
  return frame;
}

CylinderLattice build_cylinder(const CylinderSpec& spec_in, int n, const Limits& lim) {
  if (n < 1) throw ConfigError("build_cylinder: n must be >= 1");
  CylinderLattice C;
  C.spec = spec_in;
  CylinderSpec& sp = C.spec;
  const int d = sp.center.d;
  if (d < 2) throw ConfigError("cylinder: dimension must be >= 2");
  if (std::fabs(norm2(sp.v) - 1.0) > 1e-9) throw ConfigError("cylinder: v must be unit");
  if ((int)sp.side.size() != d - 1) throw ConfigError("cylinder: need d-1 side lengths");
  for (double s : sp.side)
    if (!(s > 0)) throw ConfigError("cylinder: base is degenerate");
  if (!(sp.height > 0)) throw ConfigError("cylinder: height must be positive");
  if (sp.frame.empty()) sp.frame = default_frame(sp.v);
  if ((int)sp.frame.size() != d - 1) throw ConfigError("cylinder: frame must have d-1 axes");
  for (size_t i = 0; i < sp.frame.size(); ++i) {
    if (std::fabs(norm2(sp.frame[i]) - 1.0) > 1e-9)
      throw ConfigError("cylinder: frame axes must be unit");
    if (std::fabs(dot(sp.frame[i], sp.v)) > 1e-9)
      throw ConfigError("cylinder: v not normal to the base within 1e-9");
    for (size_t j = i + 1; j < sp.frame.size(); ++j)
      if (std::fabs(dot(sp.frame[i], sp.frame[j])) > 1e-9)
        throw ConfigError("cylinder: frame not orthonormal");
  }
  C.base_measure = 1;
  for (double s : sp.side) C.base_measure *= s;

  // exact path: v and frame are signed standard axes, data rational
  int vaxis = -1, vsign = 0;
  {
    int nz = 0;
    for (int i = 0; i < d; ++i)
      if (sp.v[i] != 0.0) { ++nz; vaxis = i; vsign = sp.v[i] > 0 ? 1 : -1; }
    bool axes_ok = nz == 1 && std::fabs(sp.v[vaxis]) == 1.0;
    if (axes_ok)
      for (const Vec& u : sp.frame) {
        int unz = 0, ua = -1;
        for (int i = 0; i < d; ++i)
          if (u[i] != 0.0) { ++unz; ua = i; }
        if (unz != 1 || std::fabs(u[ua]) != 1.0 || ua == vaxis) { axes_ok = false; break; }
      }
    C.exact_axis = axes_ok;
  }

  C.g.d = d;
  C.g.n = n;
  IVec lo, hi;
  lo.d = hi.d = (int8_t)d;
  for (int j = 0; j < d; ++j) {
    double ext = sp.height * std::fabs(sp.v[j]);
    for (size_t i = 0; i < sp.frame.size(); ++i)
      ext += 0.5 * sp.side[i] * std::fabs(sp.frame[i][j]);
    lo.c[j] = (int32_t)std::floor((sp.center[j] - ext) * n) - 1;
    hi.c[j] = (int32_t)std::ceil((sp.center[j] + ext) * n) + 1;
  }

  std::function<bool(const IVec&)> member;
  if (C.exact_axis) {
    // per-axis rational bounds |y_j - c_j| <= w_j
    std::array<Rat, kMaxDim> w{};
    std::array<Rat, kMaxDim> c{};
    for (int j = 0; j < d; ++j) c[j] = rat_from_double(sp.center[j]);
    w[vaxis] = rat_from_double(sp.height);
    for (size_t i = 0; i < sp.frame.size(); ++i) {
      int ua = 0;
      for (int j = 0; j < d; ++j)
        if (sp.frame[i][j] != 0.0) ua = j;
      w[ua] = rat_from_double(sp.side[i] / 2.0);
    }
    member = [c, w, d, n](const IVec& z) {
      for (int j = 0; j < d; ++j)
        if (w[j] < rat_abs(Rat(z.c[j], n) - c[j])) return false;
      return true;
    };
  } else {
    CylinderSpec s = sp;
    member = [s, d, n](const IVec& z) {
      Vec y = vec_of(z, 1.0 / n) - s.center;
      if (std::fabs(dot(y, s.v)) > s.height) return false;
      for (size_t i = 0; i < s.frame.size(); ++i)
        if (std::fabs(dot(y, s.frame[i])) > 0.5 * s.side[i]) return false;
      return true;
    };
  }
  build_graph(C.g, lo, hi, member, lim);

  // boundary halves: strict sign of (z_center - x).v, neighbor outside
  for (int32_t i = 0; i < (int32_t)C.g.verts.size(); ++i) {
    const IVec& z = C.g.verts[i];
    bool outside_nb = false;
    for (int a = 0; a < d && !outside_nb; ++a)
      for (int s = -1; s <= 1 && !outside_nb; s += 2)
        if (!C.g.has_vertex(ivec_shift(z, a, s))) outside_nb = true;
    if (!outside_nb) continue;
    int sign;
    if (C.exact_axis) {
      Rat t = Rat(z.c[vaxis], n) - rat_from_double(sp.center[vaxis]);
      int s0 = t.num > 0 ? 1 : (t.num < 0 ? -1 : 0);
      sign = vsign * s0;
    } else {
      double t = dot(vec_of(z, 1.0 / n) - sp.center, sp.v);
      sign = t > 0 ? 1 : (t < 0 ? -1 : 0);
    }
    if (sign > 0) C.tprime.push_back(i);
    else if (sign < 0) C.bprime.push_back(i);
  }
  return C;
}

// --------------------------------------------------------------- balls

static bool in_ball(const Vec& y, const Vec& c, double r) {
  Vec diff = y - c;
  return dot(diff, diff) <= r * r + 1e-12;
}

BallRegion build_ball(const BallSpec& spec, int n, const Limits& lim) {
  if (n < 1) throw ConfigError("build_ball: n must be >= 1");
  const int d = spec.center.d;
  if (!(spec.radius > 0)) throw ConfigError("ball: radius must be positive");
  if (std::fabs(norm2(spec.v) - 1.0) > 1e-9) throw ConfigError("ball: v must be unit");
  BallRegion B;
  B.spec = spec;
  B.g.d = d;
  B.g.n = n;
  IVec lo, hi;
  lo.d = hi.d = (int8_t)d;
  for (int j = 0; j < d; ++j) {
    lo.c[j] = (int32_t)std::floor((spec.center[j] - spec.radius) * n) - 1;
    hi.c[j] = (int32_t)std::ceil((spec.center[j] + spec.radius) * n) + 1;
  }
  const bool slab = spec.slab_halfheight >= 0;
  build_graph(
      B.g, lo, hi,
      [&](const IVec& z) {
        Vec y = vec_of(z, 1.0 / n);
        if (!in_ball(y, spec.center, spec.radius)) return false;
        if (slab && std::fabs(dot(y - spec.center, spec.v)) >
                        spec.slab_halfheight + 1e-12)
          return false;
        return true;
      },
      lim);
  if (B.g.verts.empty()) throw ConfigError("ball: no lattice points inside");

  // discrete boundary halves: the sign test runs on the OUTSIDE
  // neighbor z relative to the ball center, >= 0 upper / < 0 lower,
  // so a vertex with outside neighbors on both sides lands in both
  for (int32_t i = 0; i < (int32_t)B.g.verts.size(); ++i) {
    const IVec& zv = B.g.verts[i];
    bool up = false, down = false;
    for (int a = 0; a < d; ++a)
      for (int s = -1; s <= 1; s += 2) {
        IVec nb = ivec_shift(zv, a, s);
        Vec y = vec_of(nb, 1.0 / n);
        if (in_ball(y, spec.center, spec.radius)) continue;
        double t = dot(y - spec.center, spec.v);
        if (t >= 0) up = true;
        else down = true;
      }
    if (up) B.upper.push_back(i);
    if (down) B.lower.push_back(i);
  }
  return B;
}

long long halfball_lower_count(const BallSpec& spec, int n) {
  const int d = spec.center.d;
  long long cnt = 0;
  IVec lo, hi, z;
  lo.d = hi.d = (int8_t)d;
  for (int j = 0; j < d; ++j) {
    lo.c[j] = (int32_t)std::floor((spec.center[j] - spec.radius) * n) - 1;
    hi.c[j] = (int32_t)std::ceil((spec.center[j] + spec.radius) * n) + 1;
  }
  z = lo;
  while (true) {
    Vec y = vec_of(z, 1.0 / n);
    if (in_ball(y, spec.center, spec.radius) && dot(y - spec.center, spec.v) < 0) ++cnt;
    int k = d - 1;
    while (k >= 0) {
      if (++z.c[k] <= hi.c[k]) break;
      z.c[k] = lo.c[k];
      --k;
    }
    if (k < 0) break;
  }
  return cnt;
}

// --------------------------------------------------------------- utils

void estimate_lattice_sizes(const DomainSpec& spec, int n,
                            long long& verts, long long& edges) {
  IVec lo, hi;
  spec.lattice_bounds(n, lo, hi);
  verts = 1;
  for (int i = 0; i < spec.d; ++i) {
    long long span = (long long)hi.c[i] - lo.c[i] + 1;
    if (verts > (1LL << 62) / std::max(1LL, span)) { verts = 1LL << 62; break; }
    verts *= span;
  }
  edges = verts == (1LL << 62) ? verts : verts * spec.d;
}

VoxelSet voxelize_open(const DomainSpec& spec, int n) {
  VoxelSet V;
  V.d = spec.d;
  V.n = n;
  IVec lo, hi;
  spec.lattice_bounds(n, lo, hi);
  IVec z = lo;
  while (true) {
    if (spec.contains_open(vec_of(z, 1.0 / n))) V.pts.push_back(z);
    int k = spec.d - 1;
    while (k >= 0) {
      if (++z.c[k] <= hi.c[k]) break;
      z.c[k] = lo.c[k];
      --k;
    }
    if (k < 0) break;
  }
  V.normalize();
  return V;
}

} // namespace fppcut
