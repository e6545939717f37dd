#include "fppcut/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

namespace fppcut {

using nlohmann::json;

static constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------- BoxR

bool BoxR::contains_closed(const RVec& p) const {
  for (int i = 0; i < d; ++i)
    if (p.c[i] < lo[i] || p.c[i] > hi[i]) return false;
  return true;
}

bool BoxR::contains_open(const RVec& p) const {
  for (int i = 0; i < d; ++i)
    if (!(lo[i] < p.c[i] && p.c[i] < hi[i])) return false;
  return true;
}

Rat BoxR::dist_linf(const RVec& p) const {
  Rat best(0);
  for (int i = 0; i < d; ++i) {
    Rat below = lo[i] - p.c[i];
    Rat above = p.c[i] - hi[i];
    Rat axis_dist = rat_max(rat_max(below, above), Rat(0));
    best = rat_max(best, axis_dist);
  }
  return best;
}

double BoxR::dist_linf(const Vec& p) const {
  double best = 0;
  for (int i = 0; i < d; ++i) {
    double below = lo[i].to_double() - p[i];
    double above = p[i] - hi[i].to_double();
    best = std::max(best, std::max({below, above, 0.0}));
  }
  return best;
}

Vec BoxR::center() const {
  Vec c = Vec::zeros(d);
  for (int i = 0; i < d; ++i) c[i] = ((lo[i] + hi[i]) / Rat(2)).to_double();
  return c;
}

Rat BoxR::face_measure() const {
  Rat m(1);
  for (int i = 0; i < d; ++i)
    if (!degenerate(i)) m = m * extent(i);
  return m;
}

BoxR box_from_intervals(const std::vector<std::array<double, 2>>& iv) {
  if (iv.empty() || iv.size() > (size_t)kMaxDim)
    throw ConfigError("box: dimension out of range");
  BoxR b;
  b.d = (int)iv.size();
  for (int i = 0; i < b.d; ++i) {
    b.lo[i] = rat_from_double(iv[i][0]);
    b.hi[i] = rat_from_double(iv[i][1]);
    if (b.hi[i] < b.lo[i]) throw ConfigError("box: empty interval");
  }
  return b;
}

// ------------------------------------------------------------- segments

Rat dist_linf_segment2(const RVec& p, const RVec& a, const RVec& b) {
  // f(s) = max(|u0 + s*e0|, |u1 + s*e1|) on [0,1]; convex piecewise
  // linear, so the minimum sits at an endpoint or a kink.
  Rat u0 = a.c[0] - p.c[0], u1 = a.c[1] - p.c[1];
  Rat e0 = b.c[0] - a.c[0], e1 = b.c[1] - a.c[1];
  std::vector<Rat> cand{Rat(0), Rat(1)};
  auto push = [&](const Rat& num, const Rat& den) {
    if (den.num == 0) return;
    Rat s = num / den;
    if (Rat(0) < s && s < Rat(1)) cand.push_back(s);
  };
  push(-u0, e0);           // first coordinate crosses zero
  push(-u1, e1);           // second coordinate crosses zero
  push(u1 - u0, e0 - e1);  // |A| = |B| with equal signs
  push(-(u0 + u1), e0 + e1);
  Rat best = rat_max(rat_abs(u0), rat_abs(u1)); // s = 0 seed
  for (const Rat& s : cand) {
    Rat f = rat_max(rat_abs(u0 + s * e0), rat_abs(u1 + s * e1));
    best = rat_min(best, f);
  }
  return best;
}

// ---------------------------------------------------------------- Poly2

static int rat_sign(const Rat& a) { return a.num < 0 ? -1 : (a.num > 0 ? 1 : 0); }

static Rat cross2(const std::array<Rat, 2>& o, const std::array<Rat, 2>& a,
                  const std::array<Rat, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

Poly2 poly2_from_halfspaces(const std::vector<std::array<Rat, 3>>& hs_in) {
  if (hs_in.size() < 3) throw ConfigError("halfspaces: need at least 3");
  // sanity box keeps the vertex enumeration finite; hitting it means the
  // polytope was unbounded (or absurdly large)
  const Rat big(1000000);
  std::vector<std::array<Rat, 3>> hs = hs_in;
  hs.push_back({Rat(1), Rat(0), big});
  hs.push_back({Rat(-1), Rat(0), big});
  hs.push_back({Rat(0), Rat(1), big});
  hs.push_back({Rat(0), Rat(-1), big});

  std::vector<std::array<Rat, 2>> pts;
  for (size_t i = 0; i < hs.size(); ++i)
    for (size_t j = i + 1; j < hs.size(); ++j) {
      Rat det = hs[i][0] * hs[j][1] - hs[i][1] * hs[j][0];
      if (det.num == 0) continue;
      Rat x = (hs[i][2] * hs[j][1] - hs[j][2] * hs[i][1]) / det;
      Rat y = (hs[i][0] * hs[j][2] - hs[j][0] * hs[i][2]) / det;
      bool ok = true;
      for (const auto& h : hs)
        if (h[2] < h[0] * x + h[1] * y) { ok = false; break; }
      if (ok) pts.push_back({x, y});
    }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    return a[1] < b[1];
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw ConfigError("halfspaces: polytope is empty or degenerate");

  // Andrew monotone chain, exact orientation tests; result CCW
  std::vector<std::array<Rat, 2>> hull;
  for (const auto& p : pts) { // lower
    while (hull.size() >= 2 &&
           rat_sign(cross2(hull[hull.size() - 2], hull.back(), p)) <= 0)
      hull.pop_back();
    hull.push_back(p);
  }
  size_t lower = hull.size() + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) { // upper
    while (hull.size() >= lower &&
           rat_sign(cross2(hull[hull.size() - 2], hull.back(), *it)) <= 0)
      hull.pop_back();
    hull.push_back(*it);
  }
  hull.pop_back();
  if (hull.size() < 3) throw ConfigError("halfspaces: polytope is empty or degenerate");
  for (const auto& v : hull)
    if (rat_abs(v[0]) == big || rat_abs(v[1]) == big)
      throw ConfigError("halfspaces: polytope unbounded (or beyond the 1e6 sanity box)");

  Poly2 p;
  p.halfspaces = hs_in;
  p.hull = std::move(hull);
  return p;
}

bool Poly2::contains_closed(const RVec& q) const {
  for (const auto& h : halfspaces)
    if (h[2] < h[0] * q.c[0] + h[1] * q.c[1]) return false;
  return true;
}

bool Poly2::contains_open(const RVec& q) const {
  for (const auto& h : halfspaces)
    if (!(h[0] * q.c[0] + h[1] * q.c[1] < h[2])) return false;
  return true;
}

Rat Poly2::dist_linf(const RVec& q) const {
  if (contains_closed(q)) return Rat(0);
  Rat best;
  bool first = true;
  for (size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    RVec ra, rb;
    ra.d = rb.d = 2;
    ra.c[0] = a[0]; ra.c[1] = a[1];
    rb.c[0] = b[0]; rb.c[1] = b[1];
    Rat dseg = dist_linf_segment2(q, ra, rb);
    if (first || dseg < best) { best = dseg; first = false; }
  }
  return best;
}

double Poly2::area() const {
  Rat twice(0);
  for (size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    twice = twice + (a[0] * b[1] - b[0] * a[1]);
  }
  return rat_abs(twice).to_double() / 2.0;
}

// --------------------------------------------------------------- solids

static double dist2_point_box(const Vec& c, const Vec& p, double t, int d) {
  // Euclidean distance from c to the cube p + t*[-1,1]^d
  double s = 0;
  for (int i = 0; i < d; ++i) {
    double below = (p[i] - t) - c[i];
    double above = c[i] - (p[i] + t);
    double g = std::max({below, above, 0.0});
    s += g * g;
  }
  return std::sqrt(s);
}

static double dist_linf_ball(const Vec& p, const Vec& c, double r, int d) {
  Vec diff = p - c;
  if (norm2(diff) <= r) return 0.0;
  // smallest t with (p + t*[-1,1]^d) meeting the ball; monotone in t
  double lo = 0.0, hi = norminf(diff);
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (dist2_point_box(c, p, mid, d) <= r) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

double dist_solid(const Vec& p, const Solid& s) {
  switch (s.kind) {
    case Solid::Box: return s.box.dist_linf(p);
    case Solid::Ball: return dist_linf_ball(p, s.ball_center, s.ball_radius, p.d);
    case Solid::Polygon: {
      RVec q;
      q.d = 2;
      q.c[0] = rat_from_double(p[0]);
      q.c[1] = rat_from_double(p[1]);
      return s.poly.dist_linf(q).to_double();
    }
  }
  return 0;
}

Side compare_dist_solid(const IVec& z, int n, const Solid& s, const Rat& thr) {
  switch (s.kind) {
    case Solid::Box:
      return s.box.dist_linf(rvec_lattice(z, n)) < thr ? Side::Below : Side::AtOrAbove;
    case Solid::Polygon:
      return s.poly.dist_linf(rvec_lattice(z, n)) < thr ? Side::Below : Side::AtOrAbove;
    case Solid::Ball: {
      double dv = dist_linf_ball(vec_of(z, 1.0 / n), s.ball_center, s.ball_radius, z.d);
      return dv < thr.to_double() ? Side::Below : Side::AtOrAbove;
    }
  }
  return Side::AtOrAbove;
}

bool solid_contains_open(const Vec& p, const Solid& s) {
  switch (s.kind) {
    case Solid::Box: {
      for (int i = 0; i < p.d; ++i)
        if (!(s.box.lo[i].to_double() < p[i] && p[i] < s.box.hi[i].to_double()))
          return false;
      return true;
    }
    case Solid::Ball:
      return norm2(p - s.ball_center) < s.ball_radius;
    case Solid::Polygon: {
      RVec q;
      q.d = 2;
      q.c[0] = rat_from_double(p[0]);
      q.c[1] = rat_from_double(p[1]);
      return s.poly.contains_open(q);
    }
  }
  return false;
}

bool solid_contains_closed_exact(const IVec& z, int n, const Solid& s, bool* exact) {
  if (exact) *exact = (s.kind != Solid::Ball);
  switch (s.kind) {
    case Solid::Box: return s.box.contains_closed(rvec_lattice(z, n));
    case Solid::Polygon: return s.poly.contains_closed(rvec_lattice(z, n));
    case Solid::Ball:
      return norm2(vec_of(z, 1.0 / n) - s.ball_center) <= s.ball_radius;
  }
  return false;
}

// --------------------------------------------------------------- patches

double Patch::measure() const {
  switch (kind) {
    case Rect: return rect.face_measure().to_double();
    case Segment: {
      double dx = (seg_b.c[0] - seg_a.c[0]).to_double();
      double dy = (seg_b.c[1] - seg_a.c[1]).to_double();
      return std::hypot(dx, dy);
    }
    case Arc: return arc_radius * 2.0 * std::acos(std::clamp(arc_min_dot, -1.0, 1.0));
  }
  return 0;
}

Vec Patch::outward_normal_at(const Vec& p) const {
  switch (kind) {
    case Rect: return Vec::axis(rect.d, axis, (double)orient);
    case Segment: return seg_normal;
    case Arc: {
      Vec r = p - arc_center;
      double nr = norm2(r);
      return nr == 0 ? Vec::axis(p.d, 0) : (1.0 / nr) * r;
    }
  }
  return Vec{};
}

static double dist_linf_arc(const Vec& p, const Patch& a) {
  double phi = std::atan2(a.arc_dir[1], a.arc_dir[0]);
  double half = std::acos(std::clamp(a.arc_min_dot, -1.0, 1.0));
  auto f = [&](double th) {
    double x = a.arc_center[0] + a.arc_radius * std::cos(th);
    double y = a.arc_center[1] + a.arc_radius * std::sin(th);
    return std::max(std::fabs(p[0] - x), std::fabs(p[1] - y));
  };
  const int N = 2048;
  double best = 1e300, best_th = phi;
  for (int i = 0; i <= N; ++i) {
    double th = phi - half + (2.0 * half) * i / N;
    double v = f(th);
    if (v < best) { best = v; best_th = th; }
  }
  double lo = best_th - 2.0 * half / N, hi = best_th + 2.0 * half / N;
  lo = std::max(lo, phi - half);
  hi = std::min(hi, phi + half);
  for (int it = 0; it < 100; ++it) {
    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (f(m1) < f(m2)) hi = m2; else lo = m1;
  }
  return std::min(best, f(0.5 * (lo + hi)));
}

double dist_patch(const Vec& p, const Patch& pa) {
  switch (pa.kind) {
    case Patch::Rect: return pa.rect.dist_linf(p);
    case Patch::Segment: {
      RVec q;
      q.d = 2;
      q.c[0] = rat_from_double(p[0]);
      q.c[1] = rat_from_double(p[1]);
      return dist_linf_segment2(q, pa.seg_a, pa.seg_b).to_double();
    }
    case Patch::Arc: return dist_linf_arc(p, pa);
  }
  return 0;
}

Side compare_dist_patch(const IVec& z, int n, const Patch& p, const Rat& thr) {
  switch (p.kind) {
    case Patch::Rect:
      return p.rect.dist_linf(rvec_lattice(z, n)) < thr ? Side::Below : Side::AtOrAbove;
    case Patch::Segment:
      return dist_linf_segment2(rvec_lattice(z, n), p.seg_a, p.seg_b) < thr
                 ? Side::Below : Side::AtOrAbove;
    case Patch::Arc: {
      double dv = dist_linf_arc(vec_of(z, 1.0 / n), p);
      return dv < thr.to_double() ? Side::Below : Side::AtOrAbove;
    }
  }
  return Side::AtOrAbove;
}

// ---------------------------------------------------------------- domain

static std::vector<std::array<double, 2>> parse_intervals(const json& j) {
  std::vector<std::array<double, 2>> iv;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw ConfigError("box: expected [lo,hi] pairs");
    iv.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return iv;
}

static Vec parse_vec(const json& j, int d, const char* what) {
  if (!j.is_array() || (int)j.size() != d)
    throw ConfigError(std::string(what) + ": expected array of length d");
  Vec v = Vec::zeros(d);
  for (int i = 0; i < d; ++i) v[i] = j[i].get<double>();
  return v;
}

static Solid parse_solid(const json& j, int d) {
  Solid s;
  if (j.contains("box")) {
    s.kind = Solid::Box;
    s.box = box_from_intervals(parse_intervals(j.at("box")));
    if (s.box.d != d) throw ConfigError("solid box: dimension mismatch");
    for (int i = 0; i < d; ++i)
      if (s.box.degenerate(i)) throw ConfigError("solid box: degenerate axis");
  } else if (j.contains("halfspaces")) {
    if (d != 2) throw ConfigError("halfspace solids are supported in d=2 only");
    s.kind = Solid::Polygon;
    std::vector<std::array<Rat, 3>> hs;
    for (const auto& h : j.at("halfspaces")) {
      Vec a = parse_vec(h.at("a"), d, "halfspace a");
      hs.push_back({rat_from_double(a[0]), rat_from_double(a[1]),
                    rat_from_double(h.at("b").get<double>())});
    }
    s.poly = poly2_from_halfspaces(hs);
  } else if (j.contains("ball")) {
    s.kind = Solid::Ball;
    const auto& b = j.at("ball");
    s.ball_center = parse_vec(b.at("center"), d, "ball center");
    s.ball_radius = b.at("radius").get<double>();
    if (!(s.ball_radius > 0)) throw ConfigError("ball: radius must be positive");
  } else {
    throw ConfigError("solid: expected one of box | halfspaces | ball");
  }
  return s;
}

// which side of a degenerate rect does the domain lie on?
static int infer_orient(const std::vector<Solid>& solids, const BoxR& rect, int axis) {
  RVec probe;
  probe.d = rect.d;
  for (int i = 0; i < rect.d; ++i) probe.c[i] = (rect.lo[i] + rect.hi[i]) / Rat(2);
  const Rat eps(1, 1 << 20);
  auto inside = [&](const Rat& offset) {
    RVec q = probe;
    q.c[axis] = rect.lo[axis] + offset;
    for (const auto& s : solids) {
      switch (s.kind) {
        case Solid::Box:
          if (s.box.contains_closed(q)) return true;
          break;
        case Solid::Polygon:
          if (s.poly.contains_closed(q)) return true;
          break;
        case Solid::Ball: {
          Vec v = Vec::zeros(rect.d);
          for (int i = 0; i < rect.d; ++i) v[i] = q.c[i].to_double();
          if (norm2(v - s.ball_center) <= s.ball_radius) return true;
          break;
        }
      }
    }
    return false;
  };
  bool plus = inside(eps), minus = inside(-eps);
  if (plus == minus)
    throw ConfigError("patch: cannot infer orientation, specify \"orient\"");
  // domain on the + side -> outward normal points -e_axis
  return plus ? -1 : +1;
}

static Patch parse_patch(const json& j, int d, const std::vector<Solid>& solids) {
  Patch p;
  if (j.contains("face")) {
    std::string f = j.at("face").get<std::string>();
    if (solids.empty() || solids[0].kind != Solid::Box)
      throw ConfigError("patch face: solid[0] must be a box");
    size_t dash = f.find('-');
    if (f.size() < 5 || f[0] != 'x' || dash == std::string::npos)
      throw ConfigError("patch face: expected like \"x0-min\"");
    int axis = std::stoi(f.substr(1, dash - 1));
    std::string side = f.substr(dash + 1);
    if (axis < 0 || axis >= d || (side != "min" && side != "max"))
      throw ConfigError("patch face: expected like \"x0-min\"");
    p.kind = Patch::Rect;
    p.rect = solids[0].box;
    p.axis = axis;
    if (side == "min") {
      p.rect.hi[axis] = p.rect.lo[axis];
      p.orient = -1;
    } else {
      p.rect.lo[axis] = p.rect.hi[axis];
      p.orient = +1;
    }
  } else if (j.contains("rect")) {
    p.kind = Patch::Rect;
    p.rect = box_from_intervals(parse_intervals(j.at("rect")));
    if (p.rect.d != d) throw ConfigError("patch rect: dimension mismatch");
    int deg = -1;
    for (int i = 0; i < d; ++i)
      if (p.rect.degenerate(i)) {
        if (deg >= 0) throw ConfigError("patch rect: more than one degenerate axis");
        deg = i;
      }
    if (deg < 0) throw ConfigError("patch rect: needs one degenerate axis");
    p.axis = deg;
    p.orient = j.contains("orient") ? j.at("orient").get<int>()
                                    : infer_orient(solids, p.rect, deg);
    if (p.orient != 1 && p.orient != -1) throw ConfigError("patch rect: orient must be +-1");
  } else if (j.contains("segment")) {
    if (d != 2) throw ConfigError("segment patches are supported in d=2 only");
    p.kind = Patch::Segment;
    const auto& s = j.at("segment");
    if (!s.is_array() || s.size() != 2) throw ConfigError("patch segment: two endpoints");
    p.seg_a.d = p.seg_b.d = 2;
    for (int i = 0; i < 2; ++i) {
      p.seg_a.c[i] = rat_from_double(s[0][i].get<double>());
      p.seg_b.c[i] = rat_from_double(s[1][i].get<double>());
    }
    p.seg_normal = parse_vec(j.at("normal"), d, "patch segment normal");
    double nn = norm2(p.seg_normal);
    if (std::fabs(nn - 1.0) > 1e-9) throw ConfigError("patch segment: normal must be unit");
  } else if (j.contains("cap")) {
    if (d != 2) throw ConfigError("cap patches are supported in d=2 only");
    p.kind = Patch::Arc;
    const auto& c = j.at("cap");
    p.arc_center = parse_vec(c.at("center"), d, "cap center");
    p.arc_radius = c.at("radius").get<double>();
    p.arc_dir = parse_vec(c.at("direction"), d, "cap direction");
    double nd = norm2(p.arc_dir);
    if (nd == 0) throw ConfigError("cap: zero direction");
    p.arc_dir = (1.0 / nd) * p.arc_dir;
    p.arc_min_dot = c.at("min_dot").get<double>();
  } else {
    throw ConfigError("patch: expected one of face | rect | segment | cap");
  }
  return p;
}

DomainSpec DomainSpec::from_json(const json& j) {
  DomainSpec ds;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string k = it.key();
    if (k != "d" && k != "solid" && k != "gamma1" && k != "gamma2")
      throw ConfigError("domain: unknown key \"" + k + "\"");
  }
  ds.d = j.at("d").get<int>();
  if (ds.d < 2 || ds.d > kMaxDim) throw ConfigError("domain: d out of range [2,6]");
  for (const auto& s : j.at("solid")) ds.solids.push_back(parse_solid(s, ds.d));
  if (ds.solids.empty()) throw ConfigError("domain: no solids");
  for (const auto& p : j.at("gamma1")) ds.gamma1.push_back(parse_patch(p, ds.d, ds.solids));
  for (const auto& p : j.at("gamma2")) ds.gamma2.push_back(parse_patch(p, ds.d, ds.solids));
  if (ds.gamma1.empty() || ds.gamma2.empty())
    throw ConfigError("domain: gamma1 and gamma2 must be nonempty");
  return ds;
}

DomainSpec DomainSpec::unit_box(int d) {
  json j;
  j["d"] = d;
  std::vector<std::array<double, 2>> iv(d, {0.0, 1.0});
  json box = json::array();
  for (auto& p : iv) box.push_back({p[0], p[1]});
  j["solid"] = json::array({json{{"box", box}}});
  j["gamma1"] = json::array({json{{"face", "x0-min"}}});
  j["gamma2"] = json::array({json{{"face", "x0-max"}}});
  return from_json(j);
}

bool DomainSpec::dist_below(const IVec& z, int n, const Rat& thr) const {
  for (const auto& s : solids)
    if (compare_dist_solid(z, n, s, thr) == Side::Below) return true;
  return false;
}

bool DomainSpec::patch_dist_below(const IVec& z, int n, int which, const Rat& thr) const {
  const auto& ps = which == 1 ? gamma1 : gamma2;
  for (const auto& p : ps)
    if (compare_dist_patch(z, n, p, thr) == Side::Below) return true;
  return false;
}

bool DomainSpec::patch_dist_at_least(const IVec& z, int n, int which, const Rat& thr) const {
  return !patch_dist_below(z, n, which, thr);
}

bool DomainSpec::contains_open(const Vec& p) const {
  for (const auto& s : solids)
    if (solid_contains_open(p, s)) return true;
  return false;
}

double DomainSpec::gamma_measure(int which) const {
  const auto& ps = which == 1 ? gamma1 : gamma2;
  double m = 0;
  for (const auto& p : ps) m += p.measure();
  return m;
}

void DomainSpec::lattice_bounds(int n, IVec& lo, IVec& hi) const {
  lo.d = hi.d = (int8_t)d;
  for (int i = 0; i < d; ++i) { lo.c[i] = INT32_MAX; hi.c[i] = INT32_MIN; }
  for (const auto& s : solids) {
    for (int i = 0; i < d; ++i) {
      Rat a, b;
      switch (s.kind) {
        case Solid::Box: a = s.box.lo[i]; b = s.box.hi[i]; break;
        case Solid::Polygon: {
          a = s.poly.hull[0][i];
          b = a;
          for (const auto& v : s.poly.hull) { a = rat_min(a, v[i]); b = rat_max(b, v[i]); }
          break;
        }
        case Solid::Ball:
          a = rat_from_double(std::floor((s.ball_center[i] - s.ball_radius) * 1024) / 1024);
          b = rat_from_double(std::ceil((s.ball_center[i] + s.ball_radius) * 1024) / 1024);
          break;
      }
      long long zlo = rat_ceil(a * Rat(n) - Rat(1));
      long long zhi = rat_floor(b * Rat(n) + Rat(1));
      lo.c[i] = (int32_t)std::min<long long>(lo.c[i], zlo);
      hi.c[i] = (int32_t)std::max<long long>(hi.c[i], zhi);
    }
  }
}

// --------------------------------------------------------------- voxels

void VoxelSet::normalize() {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

static long long ipow_checked(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (1LL << 62) / b) throw CapacityError("n^d overflows 64-bit arithmetic");
    r *= b;
  }
  return r;
}

Rat VoxelSet::measure_rat() const {
  return Rat((long long)pts.size(), ipow_checked(n, d));
}

bool VoxelSet::contains(const IVec& z) const {
  return std::binary_search(pts.begin(), pts.end(), z);
}

Rat symdiff_distance(const VoxelSet& a, const VoxelSet& b) {
  if (a.n != b.n || a.d != b.d)
    throw ConfigError("symdiff_distance: voxel sets live at different scales");
  size_t i = 0, j = 0;
  long long diff = 0;
  while (i < a.pts.size() && j < b.pts.size()) {
    if (a.pts[i] == b.pts[j]) { ++i; ++j; }
    else if (a.pts[i] < b.pts[j]) { ++diff; ++i; }
    else { ++diff; ++j; }
  }
  diff += (long long)(a.pts.size() - i) + (long long)(b.pts.size() - j);
  return Rat(diff, ipow_checked(a.n, a.d));
}

Rat cube_box_overlap(const IVec& z, int n, const BoxR& b) {
  Rat vol(1);
  for (int i = 0; i < b.d; ++i) {
    Rat clo = Rat(2 * z.c[i] - 1, 2 * n);
    Rat chi = Rat(2 * z.c[i] + 1, 2 * n);
    Rat lo = rat_max(clo, b.lo[i]);
    Rat hi = rat_min(chi, b.hi[i]);
    if (!(lo < hi)) return Rat(0);
    vol = vol * (hi - lo);
  }
  return vol;
}

Rat symdiff_voxel_box(const VoxelSet& r, const BoxR& b) {
  Rat inter(0);
  for (const auto& z : r.pts) inter = inter + cube_box_overlap(z, r.n, b);
  Rat vol_b(1);
  for (int i = 0; i < b.d; ++i) vol_b = vol_b * b.extent(i);
  return r.measure_rat() + vol_b - Rat(2) * inter;
}

double symdiff_voxel_poly2(const VoxelSet& r, const Poly2& p) {
  // Sutherland-Hodgman clip of the polygon against each voxel square
  auto clip_area = [&](const IVec& z) {
    std::vector<std::array<double, 2>> poly;
    for (const auto& v : p.hull) poly.push_back({v[0].to_double(), v[1].to_double()});
    for (int axis = 0; axis < 2; ++axis)
      for (int side = 0; side < 2; ++side) {
        double bound = (2.0 * z.c[axis] + (side ? 1 : -1)) / (2.0 * r.n);
        std::vector<std::array<double, 2>> out;
        auto in = [&](const std::array<double, 2>& q) {
          return side ? q[axis] <= bound : q[axis] >= bound;
        };
        for (size_t i = 0; i < poly.size(); ++i) {
          auto a = poly[i], b2 = poly[(i + 1) % poly.size()];
          bool ia = in(a), ib = in(b2);
          if (ia) out.push_back(a);
          if (ia != ib) {
            double t = (bound - a[axis]) / (b2[axis] - a[axis]);
            out.push_back({a[0] + t * (b2[0] - a[0]), a[1] + t * (b2[1] - a[1])});
          }
        }
        poly = std::move(out);
        if (poly.empty()) return 0.0;
      }
    double tw = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
      auto a = poly[i], b2 = poly[(i + 1) % poly.size()];
      tw += a[0] * b2[1] - b2[0] * a[1];
    }
    return std::fabs(tw) / 2.0;
  };
  double inter = 0;
  for (const auto& z : r.pts) inter += clip_area(z);
  return r.measure() + p.area() - 2.0 * inter;
}

// ---------------------------------------------------------- facet sets

Facet Facet::axis_rect(const BoxR& r, int axis, int orient) {
  if (!r.degenerate(axis)) throw ConfigError("facet rect: axis not degenerate");
  Facet f;
  f.rect = r;
  f.axis = axis;
  f.support = r.center();
  f.normal = Vec::axis(r.d, axis, (double)orient);
  f.measure = r.face_measure().to_double();
  return f;
}

Facet Facet::segment2(const RVec& a, const RVec& b, const Vec& normal) {
  Facet f;
  f.seg = std::array<RVec, 2>{a, b};
  f.support = Vec::zeros(2);
  f.support[0] = ((a.c[0] + b.c[0]) / Rat(2)).to_double();
  f.support[1] = ((a.c[1] + b.c[1]) / Rat(2)).to_double();
  double nn = norm2(normal);
  if (std::fabs(nn - 1.0) > 1e-9) throw ConfigError("facet: normal must be unit");
  f.normal = normal;
  f.measure = std::hypot((b.c[0] - a.c[0]).to_double(), (b.c[1] - a.c[1]).to_double());
  return f;
}

Facet Facet::measure_only(const Vec& support, const Vec& normal, double measure) {
  Facet f;
  f.support = support;
  double nn = norm2(normal);
  if (std::fabs(nn - 1.0) > 1e-9) throw ConfigError("facet: normal must be unit");
  f.normal = normal;
  if (measure < 0) throw ConfigError("facet: negative measure");
  f.measure = measure;
  return f;
}

double facet_integral(const std::vector<Facet>& fs,
                      const std::function<double(const Vec&)>& weight) {
  double s = 0;
  for (const auto& f : fs) s += f.measure * weight(f.normal);
  return s;
}

Rat rect_overlap_measure(const Facet& a, const Facet& b) {
  if (!a.rect || !b.rect) throw ConfigError("facet overlap: not axis-aligned rects");
  if (a.axis != b.axis) return Rat(0);
  const BoxR& ra = *a.rect;
  const BoxR& rb = *b.rect;
  if (!(ra.lo[a.axis] == rb.lo[b.axis])) return Rat(0); // different planes
  Rat m(1);
  for (int i = 0; i < ra.d; ++i) {
    if (i == a.axis) continue;
    Rat lo = rat_max(ra.lo[i], rb.lo[i]);
    Rat hi = rat_min(ra.hi[i], rb.hi[i]);
    if (!(lo < hi)) return Rat(0);
    m = m * (hi - lo);
  }
  return m;
}

double seg_overlap_measure(const Facet& a, const Facet& b) {
  if (!a.seg || !b.seg) throw ConfigError("facet overlap: not segments");
  const RVec &p = (*a.seg)[0], &q = (*a.seg)[1];
  const RVec &u = (*b.seg)[0], &v = (*b.seg)[1];
  Rat dx = q.c[0] - p.c[0], dy = q.c[1] - p.c[1];
  auto colin = [&](const RVec& w) {
    return ((w.c[0] - p.c[0]) * dy - (w.c[1] - p.c[1]) * dx).num == 0;
  };
  if (!colin(u) || !colin(v)) return 0.0;
  // parameter along a's direction, exact
  bool use_x = dx.num != 0;
  auto param = [&](const RVec& w) {
    return use_x ? (w.c[0] - p.c[0]) / dx : (w.c[1] - p.c[1]) / dy;
  };
  Rat tu = param(u), tv = param(v);
  Rat lo = rat_max(rat_min(tu, tv), Rat(0));
  Rat hi = rat_min(rat_max(tu, tv), Rat(1));
  if (!(lo < hi)) return 0.0;
  double len_a = std::hypot(dx.to_double(), dy.to_double());
  return (hi - lo).to_double() * len_a;
}

Rat facet_overlap_measure(const Facet& a, const Facet& b) {
  if (a.rect && b.rect) return rect_overlap_measure(a, b);
  if (a.seg && b.seg) {
    double m = seg_overlap_measure(a, b);
    return rat_from_double(m); // exact only when the length is dyadic
  }
  if ((a.rect && b.seg) || (a.seg && b.rect)) return Rat(0);
  throw ConfigError("facet overlap: measure-only facets cannot be clipped");
}

// ----------------------------------------------------- polyhedral sets

PolyhedralSet PolyhedralSet::box(const BoxR& b) {
  PolyhedralSet ps;
  ps.d = b.d;
  Solid s;
  s.kind = Solid::Box;
  s.box = b;
  ps.cells.push_back(s);
  for (int axis = 0; axis < b.d; ++axis) {
    BoxR lo = b, hi = b;
    lo.hi[axis] = lo.lo[axis];
    hi.lo[axis] = hi.hi[axis];
    ps.facets.push_back(Facet::axis_rect(lo, axis, -1));
    ps.facets.push_back(Facet::axis_rect(hi, axis, +1));
  }
  return ps;
}

PolyhedralSet PolyhedralSet::from_json(const json& j) {
  PolyhedralSet ps;
  if (j.contains("box")) {
    BoxR b = box_from_intervals(parse_intervals(j.at("box")));
    return box(b);
  }
  if (j.contains("halfspaces")) {
    Solid s = parse_solid(j, 2);
    ps.d = 2;
    ps.cells.push_back(s);
    const auto& hull = s.poly.hull;
    for (size_t i = 0; i < hull.size(); ++i) {
      const auto& a = hull[i];
      const auto& b = hull[(i + 1) % hull.size()];
      RVec ra, rb;
      ra.d = rb.d = 2;
      ra.c[0] = a[0]; ra.c[1] = a[1];
      rb.c[0] = b[0]; rb.c[1] = b[1];
      // hull is CCW, outward normal is the edge direction rotated -90
      double ex = (b[0] - a[0]).to_double(), ey = (b[1] - a[1]).to_double();
      double len = std::hypot(ex, ey);
      Vec nrm = Vec::zeros(2);
      nrm[0] = ey / len;
      nrm[1] = -ex / len;
      ps.facets.push_back(Facet::segment2(ra, rb, nrm));
    }
    return ps;
  }
  if (j.contains("facets")) {
    ps.d = j.value("d", 0);
    for (const auto& fj : j.at("facets")) {
      Facet f;
      if (fj.contains("rect")) {
        BoxR r = box_from_intervals(parse_intervals(fj.at("rect")));
        int deg = -1;
        for (int i = 0; i < r.d; ++i)
          if (r.degenerate(i)) {
            if (deg >= 0) throw ConfigError("facet rect: more than one degenerate axis");
            deg = i;
          }
        if (deg < 0) throw ConfigError("facet rect: needs one degenerate axis");
        int orient = fj.at("orient").get<int>();
        if (orient != 1 && orient != -1) throw ConfigError("facet: orient must be +-1");
        f = Facet::axis_rect(r, deg, orient);
        if (ps.d == 0) ps.d = r.d;
      } else if (fj.contains("segment")) {
        RVec a, b;
        a.d = b.d = 2;
        for (int i = 0; i < 2; ++i) {
          a.c[i] = rat_from_double(fj.at("segment")[0][i].get<double>());
          b.c[i] = rat_from_double(fj.at("segment")[1][i].get<double>());
        }
        Vec nrm = parse_vec(fj.at("normal"), 2, "facet normal");
        f = Facet::segment2(a, b, nrm);
        if (ps.d == 0) ps.d = 2;
      } else if (fj.contains("measure")) {
        int d = (int)fj.at("normal").size();
        f = Facet::measure_only(parse_vec(fj.at("support"), d, "facet support"),
                                parse_vec(fj.at("normal"), d, "facet normal"),
                                fj.at("measure").get<double>());
        if (ps.d == 0) ps.d = d;
      } else {
        throw ConfigError("facet: expected rect | segment | (support,normal,measure)");
      }
      if (fj.contains("density")) {
        f.density = fj.at("density").get<double>();
        if (f.density < 0) throw ConfigError("facet: negative density");
      }
      ps.facets.push_back(f);
    }
    if (ps.facets.empty()) throw ConfigError("facets: empty list");
    return ps;
  }
  throw ConfigError("polyhedral set: expected box | halfspaces | facets");
}

bool PolyhedralSet::contains_closed(const Vec& p) const {
  for (const auto& s : cells) {
    switch (s.kind) {
      case Solid::Box: {
        bool in = true;
        for (int i = 0; i < p.d; ++i)
          if (p[i] < s.box.lo[i].to_double() || p[i] > s.box.hi[i].to_double()) {
            in = false;
            break;
          }
        if (in) return true;
        break;
      }
      case Solid::Polygon: {
        RVec q;
        q.d = 2;
        q.c[0] = rat_from_double(p[0]);
        q.c[1] = rat_from_double(p[1]);
        if (s.poly.contains_closed(q)) return true;
        break;
      }
      case Solid::Ball:
        if (norm2(p - s.ball_center) <= s.ball_radius) return true;
        break;
    }
  }
  return false;
}

double PolyhedralSet::volume() const {
  if (cells.empty()) throw ConfigError("polyhedral set: surface-only, no volume");
  double v = 0; // cells assumed disjoint up to null sets
  for (const auto& s : cells) {
    switch (s.kind) {
      case Solid::Box: {
        Rat r(1);
        for (int i = 0; i < s.box.d; ++i) r = r * s.box.extent(i);
        v += r.to_double();
        break;
      }
      case Solid::Polygon: v += s.poly.area(); break;
      case Solid::Ball: {
        int d = s.ball_center.d;
        double a = d == 2 ? kPi : 4.0 * kPi / 3.0;
        v += a * std::pow(s.ball_radius, d);
        break;
      }
    }
  }
  return v;
}

} // namespace fppcut
