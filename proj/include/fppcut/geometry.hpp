// Continuous-side geometry: domains with boundary patches, voxel unions,
// polyhedral sets with facet data, and the L-infinity distance predicates
// the lattice discretization is built on.
//
// Exactness contract: coordinates parsed from JSON are dyadic rationals
// (the double values themselves) and all box / axis-rectangle / d=2
// polygon predicates are evaluated in exact rational arithmetic.  Ball
// and arc primitives run on doubles with absolute tolerance 1e-12.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fppcut/errors.hpp"
#include "fppcut/rat.hpp"
#include "fppcut/vec.hpp"

namespace fppcut {

// ---------------------------------------------------------------- boxes

// Closed axis-aligned box; degenerate axes (lo == hi) are allowed and
// used for boundary patches and flat facets.
struct BoxR {
  std::array<Rat, kMaxDim> lo{}, hi{};
  int d = 0;

  Rat extent(int k) const { return hi[k] - lo[k]; }
  bool degenerate(int k) const { return lo[k] == hi[k]; }
  bool contains_closed(const RVec& p) const;
  bool contains_open(const RVec& p) const; // strict on every axis
  // exact L-infinity distance to the closed box
  Rat dist_linf(const RVec& p) const;
  double dist_linf(const Vec& p) const;
  Vec center() const;
  // product of nondegenerate extents ((d-1)-measure for one degenerate axis,
  // volume when none)
  Rat face_measure() const;
};

BoxR box_from_intervals(const std::vector<std::array<double, 2>>& iv);

// ------------------------------------------------------- d=2 polygons

// Convex polygon from a halfspace list, vertices enumerated exactly.
struct Poly2 {
  std::vector<std::array<Rat, 3>> halfspaces; // a0*x + a1*y <= b
  std::vector<std::array<Rat, 2>> hull;       // CCW, exact

  bool contains_closed(const RVec& p) const;
  bool contains_open(const RVec& p) const;
  Rat dist_linf(const RVec& p) const; // 0 inside, else min over edges
  double area() const;
};

Poly2 poly2_from_halfspaces(const std::vector<std::array<Rat, 3>>& hs);

// exact L-infinity point-to-segment distance in the plane
Rat dist_linf_segment2(const RVec& p, const RVec& a, const RVec& b);

// ---------------------------------------------------------------- solids

struct Solid {
  enum Kind { Box, Polygon, Ball } kind = Box;
  BoxR box;
  Poly2 poly;
  Vec ball_center;
  double ball_radius = 0;
};

// Comparison of a distance against a rational threshold.  Box, axis
// rectangle, segment and polygon primitives decide this exactly; ball
// and arc primitives decide it on doubles (absolute accuracy ~1e-12,
// ties land on whichever side the rounded value falls).
enum class Side { Below, AtOrAbove };

// decide d_linf(z/n, solid) < thr, exact where the primitive allows
Side compare_dist_solid(const IVec& z, int n, const Solid& s, const Rat& thr);
double dist_solid(const Vec& p, const Solid& s);
bool solid_contains_open(const Vec& p, const Solid& s);
bool solid_contains_closed_exact(const IVec& z, int n, const Solid& s, bool* exact);

// --------------------------------------------------------------- patches

// A boundary patch of the domain (a piece of Gamma^1 or Gamma^2).
struct Patch {
  enum Kind { Rect, Segment, Arc } kind = Rect;
  // Rect: axis-aligned closed box, normally degenerate along `axis`
  BoxR rect;
  int axis = -1;      // degenerate axis (outward normal direction), Rect only
  int orient = 0;     // +1 normal points +e_axis, -1 points -e_axis
  // Segment (d=2)
  RVec seg_a, seg_b;
  Vec seg_normal;     // unit outward normal
  // Arc (d=2): points on the circle |y-c|=r with (y-c).dir/r >= min_dot
  Vec arc_center, arc_dir;
  double arc_radius = 0, arc_min_dot = -1;

  double measure() const; // H^{d-1} of the patch
  Vec outward_normal_at(const Vec& p) const;
};

Side compare_dist_patch(const IVec& z, int n, const Patch& p, const Rat& thr);
double dist_patch(const Vec& p, const Patch& pa);

// ---------------------------------------------------------------- domain

// An open bounded domain given as a finite union of solids, with two
// disjoint boundary patch families gamma1 (sources) and gamma2 (sinks).
struct DomainSpec {
  int d = 0;
  std::vector<Solid> solids;
  std::vector<Patch> gamma1, gamma2;

  static DomainSpec from_json(const nlohmann::json& j);
  static DomainSpec unit_box(int d); // (0,1)^d, gamma1 = {x0 min}, gamma2 = {x0 max}

  // d_linf(z/n, domain) < thr  (distance to the union = min over solids)
  bool dist_below(const IVec& z, int n, const Rat& thr) const;
  // d_linf(z/n, Gamma^i) < thr / >= thr, patch family i in {1,2}
  bool patch_dist_below(const IVec& z, int n, int which, const Rat& thr) const;
  bool patch_dist_at_least(const IVec& z, int n, int which, const Rat& thr) const;

  bool contains_open(const Vec& p) const; // strict interior of some solid
  double gamma_measure(int which) const;  // H^{d-1}(Gamma^i)
  // integer bounding box at scale n, padded by one lattice step
  void lattice_bounds(int n, IVec& lo, IVec& hi) const;
};

// --------------------------------------------------------------- voxels

// Union of closed cubes z/n + [-1/(2n), 1/(2n)]^d over a point set.
struct VoxelSet {
  int d = 0;
  int n = 1;
  std::vector<IVec> pts; // sorted lexicographically, unique

  void normalize();
  Rat measure_rat() const;
  double measure() const { return measure_rat().to_double(); }
  bool contains(const IVec& z) const;
};

// L^d(E symdiff F); requires equal scales
Rat symdiff_distance(const VoxelSet& a, const VoxelSet& b);
// L^d(R symdiff B) against a continuous box, exact
Rat symdiff_voxel_box(const VoxelSet& r, const BoxR& b);
double symdiff_voxel_poly2(const VoxelSet& r, const Poly2& p);

// ---------------------------------------------------------- facet sets

// One flat piece of a polyhedral surface.  Axis-aligned rectangles keep
// exact coordinates; measure-only facets carry just (support, normal,
// measure) and cannot be clipped.
struct Facet {
  Vec support;
  Vec normal;      // unit
  double measure = 0;
  std::optional<BoxR> rect; // exact shape when axis-aligned
  int axis = -1;            // normal axis when rect is set
  std::optional<std::array<RVec, 2>> seg; // exact shape, d=2 general segment
  double density = -1.0;    // optional attached surface density f >= 0

  static Facet axis_rect(const BoxR& r, int axis, int orient);
  static Facet segment2(const RVec& a, const RVec& b, const Vec& normal);
  static Facet measure_only(const Vec& support, const Vec& normal, double measure);
};

// A bounded set described by solid cells (when membership is needed)
// and/or an explicit facet decomposition of its boundary surface.
struct PolyhedralSet {
  int d = 0;
  std::vector<Solid> cells;
  std::vector<Facet> facets;

  static PolyhedralSet from_json(const nlohmann::json& j);
  static PolyhedralSet box(const BoxR& b);

  bool has_cells() const { return !cells.empty(); }
  bool contains_closed(const Vec& p) const;
  double volume() const;
};

// sum over facets of measure * weight(outward normal)
double facet_integral(const std::vector<Facet>& fs,
                      const std::function<double(const Vec&)>& weight);

// exact (d-1)-measure of the overlap of two axis-aligned rectangle
// facets lying in the same hyperplane; zero if planes differ
Rat rect_overlap_measure(const Facet& a, const Facet& b);
// overlap length of two collinear exact segments (d=2)
double seg_overlap_measure(const Facet& a, const Facet& b);
// dispatches to the rect/segment overlap; measure-only facets -> error
Rat facet_overlap_measure(const Facet& a, const Facet& b);

// volume of the intersection of the voxel cube at z/n with a box
Rat cube_box_overlap(const IVec& z, int n, const BoxR& b);

} // namespace fppcut
