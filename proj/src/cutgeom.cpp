#include "fppcut/cutgeom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>

#include <nlohmann/json.hpp>

#include "fppcut/flow.hpp"

namespace fppcut {

// ------------------------------------------------------ empirical side

double EmpiricalMeasure::scale_area() const {
  double s = 1;
  for (int k = 0; k + 1 < d; ++k) s *= n;
  return s;
}

double EmpiricalMeasure::total_mass() const {
  return (double)total_int / ((double)D * scale_area());
}

EmpiricalMeasure empirical_measure(const LatticeGraph& g,
                                   const std::vector<int32_t>& cut,
                                   const CapacityField& field) {
  if (field.cap.size() != g.edges.size())
    throw ConfigError("empirical_measure: field does not match the graph");
  EmpiricalMeasure mu;
  mu.d = g.d;
  mu.n = g.n;
  mu.D = field.D;
  mu.atoms.reserve(cut.size());
  for (int32_t e : cut) {
    if (e < 0 || e >= (int32_t)g.edges.size())
      throw ConfigError("empirical_measure: bad edge index");
    mu.atoms.push_back({g.edge_center(e), field.cap[e]});
    mu.total_int += field.cap[e];
  }
  return mu;
}

double measure_pairing(const EmpiricalMeasure& mu,
                       const std::function<double(const Vec&)>& g) {
  const double unit = 1.0 / ((double)mu.D * mu.scale_area());
  double s = 0;
  for (const auto& a : mu.atoms) {
    double v = g(a.center);
    if (std::isnan(v))
      throw ConfigError("measure_pairing: test function undefined at an atom");
    s += unit * (double)a.weight_int * v;
  }
  return s;
}

void export_measure_csv(const EmpiricalMeasure& mu, std::ostream& os) {
  for (int k = 0; k < mu.d; ++k) os << "c" << (k + 1) << ",";
  os << "weight\n";
  const double unit = 1.0 / ((double)mu.D * mu.scale_area());
  char buf[64];
  for (const auto& a : mu.atoms) {
    for (int k = 0; k < mu.d; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", a.center[k]);
      os << buf << ",";
    }
    std::snprintf(buf, sizeof buf, "%.17g", unit * (double)a.weight_int);
    os << buf << "\n";
  }
}

std::vector<int32_t> reachable_set(const LatticeDomain& dom,
                                   const std::vector<int32_t>& cut) {
  for (int32_t e : cut)
    if (e < 0 || e >= (int32_t)dom.g.edges.size())
      throw ConfigError("reachable_set: cut edge outside the graph");
  return reachable_from(dom.g, dom.gamma1, cut);
}

VoxelSet continuous_representation(const LatticeGraph& g,
                                   const std::vector<int32_t>& r) {
  VoxelSet vs;
  vs.d = g.d;
  vs.n = g.n;
  vs.pts.reserve(r.size());
  for (int32_t vi : r) {
    if (vi < 0 || vi >= (int32_t)g.verts.size())
      throw ConfigError("continuous_representation: bad vertex index");
    vs.pts.push_back(g.verts[vi]);
  }
  vs.normalize();
  return vs;
}

nlohmann::json voxelset_rle_json(const VoxelSet& vs) {
  nlohmann::json runs = nlohmann::json::array();
  size_t i = 0;
  while (i < vs.pts.size()) {
    size_t j = i + 1;
    while (j < vs.pts.size() &&
           vs.pts[j] == ivec_shift(vs.pts[j - 1], vs.d - 1, 1))
      ++j;
    nlohmann::json start = nlohmann::json::array();
    for (int k = 0; k < vs.d; ++k) start.push_back(vs.pts[i].c[k]);
    runs.push_back({{"start", start}, {"len", j - i}});
    i = j;
  }
  return nlohmann::json{{"d", vs.d}, {"n", vs.n}, {"runs", runs}};
}

VoxelSet voxelset_from_rle_json(const nlohmann::json& j) {
  VoxelSet vs;
  vs.d = j.at("d").get<int>();
  vs.n = j.at("n").get<int>();
  if (vs.d < 1 || vs.d > kMaxDim || vs.n < 1)
    throw ConfigError("voxel set: bad dimension or scale");
  for (const auto& run : j.at("runs")) {
    const auto& st = run.at("start");
    if ((int)st.size() != vs.d) throw ConfigError("voxel set: bad run start");
    IVec z;
    z.d = (int8_t)vs.d;
    for (int k = 0; k < vs.d; ++k) z.c[k] = st[k].get<int32_t>();
    long long len = run.at("len").get<long long>();
    if (len < 1) throw ConfigError("voxel set: bad run length");
    for (long long t = 0; t < len; ++t)
      vs.pts.push_back(ivec_shift(z, vs.d - 1, (int32_t)t));
  }
  vs.normalize();
  return vs;
}

// --------------------------------------------------- voxel perimeter

namespace {

Rat face_in_box(const BoxR& face, int axis, const BoxR& b) {
  const Rat& off = face.lo[axis];
  if (!(b.lo[axis] < off && off < b.hi[axis])) return Rat(0);
  Rat m(1);
  for (int k = 0; k < face.d; ++k) {
    if (k == axis) continue;
    Rat lo = rat_max(face.lo[k], b.lo[k]);
    Rat hi = rat_min(face.hi[k], b.hi[k]);
    if (!(lo < hi)) return Rat(0);
    m = m * (hi - lo);
  }
  return m;
}

Rat face_full_area(const BoxR& face, int axis) {
  Rat m(1);
  for (int k = 0; k < face.d; ++k)
    if (k != axis) m = m * face.extent(k);
  return m;
}

Vec face_center(const BoxR& face) {
  Vec c = Vec::zeros(face.d);
  for (int k = 0; k < face.d; ++k)
    c.c[k] = ((face.lo[k] + face.hi[k]) / Rat(2)).to_double();
  return c;
}

// measure of a voxel face inside the open domain; exact for boxes and
// d=2 polygons, midpoint rule once a ball solid is involved
Rat face_measure_in_domain(const DomainSpec& spec, const BoxR& face, int axis) {
  if (spec.d == 2) {
    const int k = 1 - axis;
    const Rat& off = face.lo[axis];
    std::vector<std::array<Rat, 2>> iv;
    for (const Solid& s : spec.solids) {
      switch (s.kind) {
        case Solid::Box: {
          if (!(s.box.lo[axis] < off && off < s.box.hi[axis])) break;
          Rat lo = rat_max(face.lo[k], s.box.lo[k]);
          Rat hi = rat_min(face.hi[k], s.box.hi[k]);
          if (lo < hi) iv.push_back({lo, hi});
          break;
        }
        case Solid::Polygon: {
          Rat lo = face.lo[k], hi = face.hi[k];
          bool empty = false;
          for (const auto& hs : s.poly.halfspaces) {
            Rat rhs = hs[2] - hs[axis] * off;
            const Rat& ck = hs[k];
            if (ck == Rat(0)) {
              if (rhs < Rat(0)) empty = true;
            } else if (Rat(0) < ck) {
              hi = rat_min(hi, rhs / ck);
            } else {
              lo = rat_max(lo, rhs / ck);
            }
            if (empty) break;
          }
          if (!empty && lo < hi) iv.push_back({lo, hi});
          break;
        }
        case Solid::Ball: {
          if (solid_contains_open(face_center(face), s))
            iv.push_back({face.lo[k], face.hi[k]});
          break;
        }
      }
    }
    std::sort(iv.begin(), iv.end(), [](const auto& a, const auto& b) {
      return a[0] < b[0];
    });
    Rat total(0);
    Rat curlo(0), curhi(0);
    bool open = false;
    for (const auto& ab : iv) {
      if (!open) {
        curlo = ab[0];
        curhi = ab[1];
        open = true;
      } else if (ab[0] < curhi || ab[0] == curhi) {
        curhi = rat_max(curhi, ab[1]);
      } else {
        total = total + (curhi - curlo);
        curlo = ab[0];
        curhi = ab[1];
      }
    }
    if (open) total = total + (curhi - curlo);
    return total;
  }

  bool all_boxes = true;
  for (const Solid& s : spec.solids)
    if (s.kind != Solid::Box) all_boxes = false;
  if (!all_boxes)
    return spec.contains_open(face_center(face)) ? face_full_area(face, axis)
                                                 : Rat(0);

  const int m = (int)spec.solids.size();
  if (m > 16) throw CapacityError("voxel perimeter: too many solids");
  Rat total(0);
  for (uint32_t mask = 1; mask < (1u << m); ++mask) {
    BoxR inter;
    bool first = true, empty = false;
    for (int i = 0; i < m && !empty; ++i) {
      if (!(mask & (1u << i))) continue;
      const BoxR& b = spec.solids[i].box;
      if (first) {
        inter = b;
        first = false;
      } else {
        for (int k = 0; k < b.d; ++k) {
          inter.lo[k] = rat_max(inter.lo[k], b.lo[k]);
          inter.hi[k] = rat_min(inter.hi[k], b.hi[k]);
          if (inter.hi[k] < inter.lo[k]) {
            empty = true;
            break;
          }
        }
      }
    }
    if (empty) continue;
    Rat a = face_in_box(face, axis, inter);
    if (__builtin_popcount(mask) % 2 == 1)
      total = total + a;
    else
      total = total - a;
  }
  return total;
}

} // namespace

PerimeterBound discrete_perimeter_bound(const LatticeDomain& dom,
                                        const std::vector<int32_t>& cut) {
  const LatticeGraph& g = dom.g;
  PerimeterBound pb;
  double area = 1;
  for (int k = 0; k + 1 < g.d; ++k) area *= g.n;
  pb.card_bound = (double)cut.size() / area;

  std::vector<int32_t> r = reachable_set(dom, cut);
  std::vector<uint8_t> in_r(g.verts.size(), 0);
  for (int32_t v : r) in_r[v] = 1;

  Rat total(0);
  const long long n2 = 2LL * g.n;
  for (int32_t vi : r) {
    const IVec& z = g.verts[vi];
    for (int j = 0; j < g.d; ++j) {
      for (int s = -1; s <= 1; s += 2) {
        int32_t ni = g.find_vertex(ivec_shift(z, j, s));
        if (ni >= 0 && in_r[ni]) continue;
        BoxR face;
        face.d = g.d;
        for (int k = 0; k < g.d; ++k) {
          if (k == j) {
            face.lo[k] = face.hi[k] = Rat(2LL * z.c[k] + s, n2);
          } else {
            face.lo[k] = Rat(2LL * z.c[k] - 1, n2);
            face.hi[k] = Rat(2LL * z.c[k] + 1, n2);
          }
        }
        total = total + face_measure_in_domain(dom.spec, face, j);
      }
    }
  }
  pb.voxel_perimeter = total.to_double();
  return pb;
}

// ----------------------------------------------------- continuous side

PolyhedralDomain polyhedral_unit_box(int d) {
  if (d < 2 || d > kMaxDim) throw ConfigError("unit box: dimension out of range");
  BoxR b;
  b.d = d;
  for (int k = 0; k < d; ++k) {
    b.lo[k] = Rat(0);
    b.hi[k] = Rat(1);
  }
  PolyhedralDomain dom;
  dom.d = d;
  dom.omega = PolyhedralSet::box(b);
  BoxR f1 = b;
  f1.hi[0] = f1.lo[0];
  dom.gamma1.push_back(Facet::axis_rect(f1, 0, -1));
  BoxR f2 = b;
  f2.lo[0] = f2.hi[0];
  dom.gamma2.push_back(Facet::axis_rect(f2, 0, +1));
  return dom;
}

PolyhedralDomain polyhedral_domain_from_spec(const DomainSpec& spec) {
  PolyhedralDomain dom;
  dom.d = spec.d;
  dom.omega.d = spec.d;
  for (const Solid& s : spec.solids) {
    if (s.kind == Solid::Ball)
      throw ConfigError("polyhedral domain: ball solids are not polyhedral");
    dom.omega.cells.push_back(s);
  }
  auto conv = [](const Patch& p) -> Facet {
    switch (p.kind) {
      case Patch::Rect:
        return Facet::axis_rect(p.rect, p.axis, p.orient);
      case Patch::Segment:
        return Facet::segment2(p.seg_a, p.seg_b, p.seg_normal);
      case Patch::Arc:
        throw ConfigError("polyhedral domain: arc patches are not polyhedral");
    }
    throw ConfigError("polyhedral domain: unknown patch kind");
  };
  for (const Patch& p : spec.gamma1) dom.gamma1.push_back(conv(p));
  for (const Patch& p : spec.gamma2) dom.gamma2.push_back(conv(p));
  return dom;
}

namespace {

Facet rect_to_seg2(const Facet& f) {
  const BoxR& r = *f.rect;
  const int k = 1 - f.axis;
  RVec a, b;
  a.d = b.d = 2;
  a.c[f.axis] = b.c[f.axis] = r.lo[f.axis];
  a.c[k] = r.lo[k];
  b.c[k] = r.hi[k];
  return Facet::segment2(a, b, f.normal);
}

// canonical clip form: segments in d=2, axis rects beyond; degenerate
// facets are dropped
std::optional<Facet> normalize_facet(const Facet& f, int d, const char* what) {
  if (d == 2) {
    Facet s = (f.rect && f.axis >= 0) ? rect_to_seg2(f) : f;
    if (!s.seg)
      throw ConfigError(std::string(what) +
                        ": facet needs rect or segment form for clipping");
    const RVec &a = (*s.seg)[0], &b = (*s.seg)[1];
    if (a.c[0] == b.c[0] && a.c[1] == b.c[1]) return std::nullopt;
    return s;
  }
  if (!f.rect || f.axis < 0)
    throw ConfigError(std::string(what) +
                      ": facet needs axis-rect form for clipping");
  for (int k = 0; k < f.rect->d; ++k)
    if (k != f.axis && f.rect->degenerate(k)) return std::nullopt;
  return f;
}

Rat cross2r(const Rat& x0, const Rat& y0, const Rat& x1, const Rat& y1) {
  return x0 * y1 - x1 * y0;
}

bool on_line_of(const Facet& piece, const RVec& p) {
  const RVec &a = (*piece.seg)[0], &b = (*piece.seg)[1];
  return cross2r(b.c[0] - a.c[0], b.c[1] - a.c[1], p.c[0] - a.c[0],
                 p.c[1] - a.c[1]) == Rat(0);
}

Rat param_of(const Facet& piece, const RVec& p) {
  const RVec &a = (*piece.seg)[0], &b = (*piece.seg)[1];
  const int k = (a.c[0] == b.c[0]) ? 1 : 0;
  return (p.c[k] - a.c[k]) / (b.c[k] - a.c[k]);
}

RVec point_at(const Facet& piece, const Rat& t) {
  const RVec &a = (*piece.seg)[0], &b = (*piece.seg)[1];
  RVec out;
  out.d = 2;
  for (int k = 0; k < 2; ++k) out.c[k] = a.c[k] + t * (b.c[k] - a.c[k]);
  return out;
}

// param interval of the collinear overlap of tool on piece
std::optional<std::array<Rat, 2>> seg_overlap_t(const Facet& piece,
                                                const Facet& tool) {
  if (!on_line_of(piece, (*tool.seg)[0]) || !on_line_of(piece, (*tool.seg)[1]))
    return std::nullopt;
  Rat t0 = param_of(piece, (*tool.seg)[0]);
  Rat t1 = param_of(piece, (*tool.seg)[1]);
  if (t1 < t0) std::swap(t0, t1);
  t0 = rat_max(t0, Rat(0));
  t1 = rat_min(t1, Rat(1));
  if (!(t0 < t1)) return std::nullopt;
  return std::array<Rat, 2>{t0, t1};
}

struct Split {
  std::vector<Facet> overlap, rest;
};

Split split_facet(const Facet& piece, const Facet& tool, int d) {
  Split out;
  if (d == 2) {
    auto t = seg_overlap_t(piece, tool);
    if (!t) {
      out.rest.push_back(piece);
      return out;
    }
    const RVec &a = (*piece.seg)[0], &b = (*piece.seg)[1];
    RVec p0 = point_at(piece, (*t)[0]);
    RVec p1 = point_at(piece, (*t)[1]);
    out.overlap.push_back(Facet::segment2(p0, p1, piece.normal));
    if (Rat(0) < (*t)[0]) out.rest.push_back(Facet::segment2(a, p0, piece.normal));
    if ((*t)[1] < Rat(1)) out.rest.push_back(Facet::segment2(p1, b, piece.normal));
    return out;
  }
  if (piece.axis != tool.axis ||
      !(piece.rect->lo[piece.axis] == tool.rect->lo[tool.axis])) {
    out.rest.push_back(piece);
    return out;
  }
  BoxR inter = *piece.rect;
  for (int k = 0; k < inter.d; ++k) {
    if (k == piece.axis) continue;
    inter.lo[k] = rat_max(inter.lo[k], tool.rect->lo[k]);
    inter.hi[k] = rat_min(inter.hi[k], tool.rect->hi[k]);
    if (!(inter.lo[k] < inter.hi[k])) {
      out.rest.push_back(piece);
      return out;
    }
  }
  const int orient = piece.normal[piece.axis] > 0 ? 1 : -1;
  out.overlap.push_back(Facet::axis_rect(inter, piece.axis, orient));
  BoxR cur = *piece.rect; // guillotine carve of piece minus inter
  for (int k = 0; k < cur.d; ++k) {
    if (k == piece.axis) continue;
    if (cur.lo[k] < inter.lo[k]) {
      BoxR p = cur;
      p.hi[k] = inter.lo[k];
      out.rest.push_back(Facet::axis_rect(p, piece.axis, orient));
      cur.lo[k] = inter.lo[k];
    }
    if (inter.hi[k] < cur.hi[k]) {
      BoxR p = cur;
      p.lo[k] = inter.hi[k];
      out.rest.push_back(Facet::axis_rect(p, piece.axis, orient));
      cur.hi[k] = inter.hi[k];
    }
  }
  return out;
}

bool solids_contain_closed(const std::vector<Solid>& ss, const RVec& p) {
  for (const Solid& s : ss) {
    switch (s.kind) {
      case Solid::Box:
        if (s.box.contains_closed(p)) return true;
        break;
      case Solid::Polygon:
        if (s.poly.contains_closed(p)) return true;
        break;
      case Solid::Ball: {
        double q = 0;
        for (int k = 0; k < p.d; ++k) {
          double t = p.c[k].to_double() - s.ball_center[k];
          q += t * t;
        }
        if (q <= s.ball_radius * s.ball_radius + 1e-12) return true;
        break;
      }
    }
  }
  return false;
}

RVec facet_center_r(const Facet& f, int d) {
  RVec c;
  c.d = (int8_t)d;
  if (f.seg) {
    for (int k = 0; k < d; ++k)
      c.c[k] = ((*f.seg)[0].c[k] + (*f.seg)[1].c[k]) / Rat(2);
  } else {
    for (int k = 0; k < d; ++k) c.c[k] = (f.rect->lo[k] + f.rect->hi[k]) / Rat(2);
  }
  return c;
}

// rational direction matching the stored unit normal
RVec facet_normal_r(const Facet& f, int d) {
  RVec nr;
  nr.d = (int8_t)d;
  if (f.rect) {
    nr.c[f.axis] = Rat(f.normal[f.axis] > 0 ? 1 : -1);
    return nr;
  }
  const RVec &a = (*f.seg)[0], &b = (*f.seg)[1];
  nr.c[0] = b.c[1] - a.c[1];
  nr.c[1] = a.c[0] - b.c[0];
  double align = nr.c[0].to_double() * f.normal[0] + nr.c[1].to_double() * f.normal[1];
  if (align < 0) {
    nr.c[0] = Rat(0) - nr.c[0];
    nr.c[1] = Rat(0) - nr.c[1];
  }
  return nr;
}

enum class Location { Interior, OnBoundary, Outside };

// probes the facet center 2^-20 off both sides; domains with features
// thinner than that are out of scope for the clipping machinery
Location locate_facet(const PolyhedralDomain& dom, const Facet& f) {
  RVec c = facet_center_r(f, dom.d);
  RVec nr = facet_normal_r(f, dom.d);
  Rat m(0);
  for (int k = 0; k < dom.d; ++k) m = rat_max(m, rat_abs(nr.c[k]));
  Rat eps = Rat(1, 1 << 20) / m;
  RVec plus = c, minus = c;
  for (int k = 0; k < dom.d; ++k) {
    plus.c[k] = plus.c[k] + nr.c[k] * eps;
    minus.c[k] = minus.c[k] - nr.c[k] * eps;
  }
  const bool pin = solids_contain_closed(dom.omega.cells, plus);
  const bool min_ = solids_contain_closed(dom.omega.cells, minus);
  if (pin && min_) return Location::Interior;
  if (pin || min_) return Location::OnBoundary;
  return Location::Outside;
}

} // namespace

ContinuousCutset make_continuous_cutset(const PolyhedralDomain& dom,
                                        const PolyhedralSet& E) {
  if (dom.d < 2 || dom.d > kMaxDim)
    throw ConfigError("continuous cutset: dimension out of range");
  if (!E.facets.empty() && E.d != dom.d)
    throw ConfigError("continuous cutset: dimension mismatch");
  if (dom.omega.cells.empty())
    throw ConfigError("continuous cutset: domain has no solid cells");

  std::vector<Facet> g1, g2, ef;
  for (const Facet& f : dom.gamma1)
    if (auto s = normalize_facet(f, dom.d, "gamma1")) g1.push_back(*s);
  for (const Facet& f : dom.gamma2)
    if (auto s = normalize_facet(f, dom.d, "gamma2")) g2.push_back(*s);
  for (const Facet& f : E.facets)
    if (auto s = normalize_facet(f, dom.d, "competitor")) ef.push_back(*s);
  if (g1.empty()) throw ConfigError("continuous cutset: gamma1 is empty");

  ContinuousCutset out;
  out.d = dom.d;
  out.E = E;

  for (const Facet& f : ef) {
    std::vector<Facet> pieces{f};
    // parts on Gamma^1 leave the surface; the residual pass below
    // removes them from Gamma^1 as well
    for (const Facet& t : g1) {
      std::vector<Facet> next;
      for (const Facet& p : pieces) {
        Split s = split_facet(p, t, dom.d);
        next.insert(next.end(), s.rest.begin(), s.rest.end());
      }
      pieces = std::move(next);
    }
    for (const Facet& t : g2) {
      std::vector<Facet> next;
      for (const Facet& p : pieces) {
        Split s = split_facet(p, t, dom.d);
        for (Facet& o : s.overlap) {
          out.surface.push_back(o);
          out.cls.push_back(SurfaceClass::OnGamma2);
        }
        next.insert(next.end(), s.rest.begin(), s.rest.end());
      }
      pieces = std::move(next);
    }
    for (const Facet& p : pieces) {
      switch (locate_facet(dom, p)) {
        case Location::Interior:
          out.surface.push_back(p);
          out.cls.push_back(SurfaceClass::InteriorE);
          break;
        case Location::OnBoundary:
          break; // untracked boundary carries no surface
        case Location::Outside:
          throw ConfigError("continuous cutset: competitor facet outside the domain");
      }
    }
  }

  for (const Facet& gf : g1) {
    std::vector<Facet> pieces{gf};
    for (const Facet& t : ef) {
      std::vector<Facet> next;
      for (const Facet& p : pieces) {
        Split s = split_facet(p, t, dom.d);
        next.insert(next.end(), s.rest.begin(), s.rest.end());
      }
      pieces = std::move(next);
    }
    for (const Facet& p : pieces) {
      out.surface.push_back(p);
      out.cls.push_back(SurfaceClass::Gamma1Residual);
    }
  }
  return out;
}

double ContinuousCutset::surface_area() const {
  double s = 0;
  for (const Facet& f : surface) s += f.measure;
  return s;
}

double continuous_capacity(const ContinuousCutset& E, const DirectionWeight& nu) {
  double s = 0;
  for (const Facet& f : E.surface) {
    double w = nu(f.normal);
    if (std::isnan(w)) throw ConfigError("capacity: direction weight undefined");
    s += f.measure * w;
  }
  return s;
}

double l1_surface_energy(const ContinuousCutset& E) {
  return continuous_capacity(E, [](const Vec& v) { return norm1(v); });
}

double capa(const ContinuousCutset& E, const std::vector<double>& f) {
  if (f.size() != E.surface.size())
    throw ConfigError("capa: density does not match the surface");
  double s = 0;
  for (size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] >= 0)) throw ConfigError("capa: negative density");
    s += E.surface[i].measure * f[i];
  }
  return s;
}

double capa(const ContinuousCutset& E) {
  if (!E.has_density()) throw ConfigError("capa: no density attached");
  return capa(E, E.f);
}

double minimality_rhs(const ContinuousCutset& E, const std::vector<double>& f,
                      const ContinuousCutset& F, const DirectionWeight& nu) {
  if (f.size() != E.surface.size())
    throw ConfigError("minimality: density does not match the surface");
  if (E.d != F.d) throw ConfigError("minimality: dimension mismatch");
  for (double x : f)
    if (!(x >= 0)) throw ConfigError("minimality: negative density");

  double rhs = 0;
  for (const Facet& psi : F.surface) {
    const double area = psi.measure;
    double covered = 0, fpart = 0;
    for (size_t i = 0; i < E.surface.size(); ++i) {
      double ov = 0;
      if (E.d == 2) {
        if (!psi.seg || !E.surface[i].seg)
          throw ConfigError("minimality: facets must be in clipped segment form");
        auto t = seg_overlap_t(psi, E.surface[i]);
        if (t) ov = ((*t)[1] - (*t)[0]).to_double() * area;
      } else {
        Rat r = rect_overlap_measure(psi, E.surface[i]);
        if (Rat(0) < r) ov = r.to_double();
      }
      covered += ov;
      fpart += ov * f[i];
    }
    // E facets are pairwise disjoint, so covered <= area up to rounding
    double rest = area - covered;
    if (rest < 0) rest = 0;
    double w = nu(psi.normal);
    if (std::isnan(w)) throw ConfigError("minimality: direction weight undefined");
    rhs += fpart + rest * w;
  }
  return rhs;
}

TMembership check_T_membership(const ContinuousCutset& E,
                               const std::vector<double>& f,
                               const DirectionWeight& nu_hat, double M,
                               double gamma1_area, double tol) {
  if (f.size() != E.surface.size())
    throw ConfigError("admissibility: density does not match the surface");
  TMembership r;
  char buf[160];
  bool nonneg = true;
  for (size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] >= 0)) {
      std::snprintf(buf, sizeof buf, "facet %zu: negative density %g", i, f[i]);
      r.failures.push_back(buf);
      nonneg = false;
      continue;
    }
    double cap_i = nu_hat(E.surface[i].normal);
    if (f[i] > cap_i + tol) {
      std::snprintf(buf, sizeof buf,
                    "facet %zu: density %.6g exceeds the direction value %.6g",
                    i, f[i], cap_i);
      r.failures.push_back(buf);
    }
  }
  // the ceiling is only meaningful for an admissible density
  if (nonneg) {
    const double c = capa(E, f);
    const double ceiling = 10.0 * E.d * E.d * M * gamma1_area;
    if (c > ceiling + tol) {
      std::snprintf(buf, sizeof buf, "capacity %.6g exceeds the ceiling %.6g", c,
                    ceiling);
      r.failures.push_back(buf);
    }
  }
  r.ok = r.failures.empty();
  return r;
}

} // namespace fppcut
