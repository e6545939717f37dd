#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "fppcut/errors.hpp"
#include "fppcut/geometry.hpp"

using namespace fppcut;
using nlohmann::json;

TEST_CASE("rational arithmetic stays reduced and exact") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-3, -6) == Rat(1, 2));
  CHECK(Rat(3, -6) == Rat(-1, 2));
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 2) - Rat(2, 3) == Rat(-1, 6));
  CHECK(Rat(2, 3) * Rat(9, 4) == Rat(3, 2));
  CHECK(Rat(1, 3) / Rat(1, 6) == Rat(2));
  CHECK(Rat(1, 12) < Rat(1, 11));
  CHECK(Rat(-1, 2) < Rat(1, 3));
  CHECK(rat_abs(Rat(-7, 3)) == Rat(7, 3));
  CHECK(rat_floor(Rat(-7, 2)) == -4);
  CHECK(rat_ceil(Rat(-7, 2)) == -3);
  CHECK(rat_floor(Rat(7, 2)) == 3);
  CHECK_THROWS_AS(Rat(1, 2) / Rat(0), std::overflow_error);
}

TEST_CASE("double to rational conversion is exact, never rounded") {
  CHECK(rat_from_double(0.375) == Rat(3, 8));
  CHECK(rat_from_double(-2.5) == Rat(-5, 2));
  CHECK(rat_from_double(0.0) == Rat(0));
  CHECK(rat_from_double(3.0) == Rat(3));
  // 0.1 is not 1/10 as a double; the conversion must preserve the
  // actual dyadic value rather than the intended decimal
  Rat tenth = rat_from_double(0.1);
  CHECK(tenth != Rat(1, 10));
  CHECK(tenth.num == 3602879701896397LL);
  CHECK(tenth.den == (1LL << 55));
  // magnitude and depth clamps reject instead of rounding
  CHECK_THROWS_AS(rat_from_double(1e300), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_double(std::ldexp(1.0, -70)), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_double(std::nan("")), std::invalid_argument);
}

TEST_CASE("box predicates decide boundary ties exactly") {
  BoxR b = box_from_intervals({{0.0, 1.0}, {0.0, 1.0}});
  RVec p;
  p.d = 2;
  p.c[0] = Rat(0);
  p.c[1] = Rat(1, 2);
  CHECK(b.contains_closed(p));
  CHECK_FALSE(b.contains_open(p));
  p.c[0] = Rat(-1, 12);
  CHECK(b.dist_linf(p) == Rat(1, 12)); // 1/12 has no double representation
  p.c[0] = Rat(1, 3);
  p.c[1] = Rat(2);
  CHECK(b.dist_linf(p) == Rat(1));
  CHECK(b.extent(0) == Rat(1));
  CHECK_FALSE(b.degenerate(0));

  BoxR face = box_from_intervals({{1.0, 1.0}, {0.25, 1.0}});
  CHECK(face.degenerate(0));
  CHECK(face.face_measure() == Rat(3, 4));
  Vec c = face.center();
  CHECK(c[0] == 1.0);
  CHECK(c[1] == 0.625);

  CHECK_THROWS_AS(box_from_intervals({{1.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(box_from_intervals({}), ConfigError);
}

TEST_CASE("solid distance comparisons land ties on AtOrAbove") {
  Solid s;
  s.kind = Solid::Box;
  s.box = box_from_intervals({{0.0, 1.0}, {0.0, 1.0}});
  // z/n = (-1/3, 1/3): distance to the box is exactly the threshold 1/3
  CHECK(compare_dist_solid(IVec{-1, 1}, 3, s, Rat(1, 3)) == Side::AtOrAbove);
  CHECK(compare_dist_solid(IVec{-1, 1}, 3, s, Rat(1, 3) + Rat(1, 1000000)) == Side::Below);
  CHECK(compare_dist_solid(IVec{1, 1}, 3, s, Rat(1, 3)) == Side::Below); // inside
  CHECK(dist_solid(Vec{-0.5, 0.5}, s) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(solid_contains_open(Vec{0.5, 0.5}, s));
  CHECK_FALSE(solid_contains_open(Vec{0.0, 0.5}, s));
}

TEST_CASE("halfspace polygons enumerate exact hulls") {
  // triangle x >= 0, y >= 0, x + y <= 1
  std::vector<std::array<Rat, 3>> hs = {
      {Rat(-1), Rat(0), Rat(0)},
      {Rat(0), Rat(-1), Rat(0)},
      {Rat(1), Rat(1), Rat(1)},
  };
  Poly2 tri = poly2_from_halfspaces(hs);
  CHECK(tri.hull.size() == 3);
  CHECK(tri.area() == doctest::Approx(0.5).epsilon(1e-15));
  RVec origin;
  origin.d = 2;
  CHECK(tri.contains_closed(origin));
  CHECK_FALSE(tri.contains_open(origin));
  RVec q;
  q.d = 2;
  q.c[0] = Rat(1, 4);
  q.c[1] = Rat(1, 4);
  CHECK(tri.contains_open(q));
  CHECK(tri.dist_linf(q) == Rat(0));
  q.c[0] = Rat(-1, 12);
  CHECK(tri.dist_linf(q) == Rat(1, 12));

  // unbounded and empty inputs are rejected
  std::vector<std::array<Rat, 3>> open_hs = {
      {Rat(-1), Rat(0), Rat(0)}, {Rat(0), Rat(-1), Rat(0)}, {Rat(0), Rat(-1), Rat(1)}};
  CHECK_THROWS_AS(poly2_from_halfspaces(open_hs), ConfigError);
  std::vector<std::array<Rat, 3>> empty_hs = {
      {Rat(1), Rat(0), Rat(-1)}, {Rat(-1), Rat(0), Rat(0)}, {Rat(0), Rat(1), Rat(1)}};
  CHECK_THROWS_AS(poly2_from_halfspaces(empty_hs), ConfigError);
}

TEST_CASE("segment distance is exact at interior and endpoint projections") {
  RVec a, b, p;
  a.d = b.d = p.d = 2;
  b.c[0] = Rat(1);
  p.c[0] = Rat(1, 2);
  p.c[1] = Rat(1, 3);
  CHECK(dist_linf_segment2(p, a, b) == Rat(1, 3));
  p.c[0] = Rat(2);
  p.c[1] = Rat(1);
  CHECK(dist_linf_segment2(p, a, b) == Rat(1)); // nearest is the endpoint (1,0)
  p.c[0] = Rat(3, 4);
  p.c[1] = Rat(0);
  CHECK(dist_linf_segment2(p, a, b) == Rat(0)); // on the segment
}

TEST_CASE("patch measures match closed forms") {
  Patch rect;
  rect.kind = Patch::Rect;
  rect.rect = box_from_intervals({{0.0, 0.0}, {0.25, 1.0}});
  rect.axis = 0;
  rect.orient = -1;
  CHECK(rect.measure() == doctest::Approx(0.75).epsilon(1e-15));
  Vec nr = rect.outward_normal_at(Vec{0.0, 0.5});
  CHECK(nr[0] == -1.0);
  CHECK(nr[1] == 0.0);

  Patch seg;
  seg.kind = Patch::Segment;
  seg.seg_a.d = seg.seg_b.d = 2;
  seg.seg_b.c[0] = Rat(1);
  seg.seg_b.c[1] = Rat(1);
  seg.seg_normal = Vec{std::sqrt(0.5), -std::sqrt(0.5)};
  CHECK(seg.measure() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  Patch arc;
  arc.kind = Patch::Arc;
  arc.arc_center = Vec{0.0, 0.0};
  arc.arc_dir = Vec{1.0, 0.0};
  arc.arc_radius = 2.0;
  arc.arc_min_dot = -1.0; // full circle
  CHECK(arc.measure() == doctest::Approx(4.0 * std::acos(-1.0)).epsilon(1e-14));
  arc.arc_min_dot = 0.0; // half circle
  CHECK(arc.measure() == doctest::Approx(2.0 * std::acos(-1.0)).epsilon(1e-14));
  Vec na = arc.outward_normal_at(Vec{0.0, 2.0});
  CHECK(na[0] == doctest::Approx(0.0));
  CHECK(na[1] == doctest::Approx(1.0));
}

TEST_CASE("domain json parsing validates keys and orientations") {
  json j = {
      {"d", 2},
      {"solid", json::array({{{"box", {{0.0, 1.0}, {0.0, 1.0}}}}})},
      {"gamma1", json::array({{{"face", "x0-min"}}})},
      {"gamma2", json::array({{{"face", "x0-max"}}})},
  };
  DomainSpec ds = DomainSpec::from_json(j);
  CHECK(ds.d == 2);
  CHECK(ds.gamma_measure(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ds.gamma_measure(2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ds.gamma1[0].orient == -1);
  CHECK(ds.gamma2[0].orient == +1);
  CHECK(ds.contains_open(Vec{0.5, 0.5}));
  CHECK_FALSE(ds.contains_open(Vec{0.0, 0.5}));

  json bad = j;
  bad["extra"] = 1;
  CHECK_THROWS_WITH_AS(DomainSpec::from_json(bad), "domain: unknown key \"extra\"",
                       ConfigError);
  json bad_d = j;
  bad_d["d"] = 1;
  CHECK_THROWS_AS(DomainSpec::from_json(bad_d), ConfigError);
  json bad_face = j;
  bad_face["gamma1"] = json::array({{{"face", "x9-min"}}});
  CHECK_THROWS_AS(DomainSpec::from_json(bad_face), ConfigError);

  // rect patch orientation is inferred from which side the solid lies on
  json jr = j;
  jr["gamma1"] = json::array({{{"rect", {{0.0, 0.0}, {0.0, 1.0}}}}});
  DomainSpec dr = DomainSpec::from_json(jr);
  CHECK(dr.gamma1[0].orient == -1);

  DomainSpec ub3 = DomainSpec::unit_box(3);
  CHECK(ub3.d == 3);
  CHECK(ub3.gamma_measure(1) == doctest::Approx(1.0).epsilon(1e-15));
  IVec lo, hi;
  ub3.lattice_bounds(2, lo, hi);
  CHECK(lo[0] <= 0);
  CHECK(hi[0] >= 2);
}

TEST_CASE("domain distance predicates use the union over solids") {
  json j = {
      {"d", 2},
      {"solid", json::array({{{"box", {{0.0, 1.0}, {0.0, 1.0}}}},
                             {{"box", {{2.0, 3.0}, {0.0, 1.0}}}}})},
      {"gamma1", json::array({{{"face", "x0-min"}}})},
      {"gamma2", json::array({{{"face", "x0-max"}}})},
  };
  DomainSpec ds = DomainSpec::from_json(j);
  // z/n = (3/2, 1/2) sits exactly 1/2 from both boxes
  CHECK(ds.dist_below(IVec{3, 1}, 2, Rat(1, 2)) == false);
  CHECK(ds.dist_below(IVec{3, 1}, 2, Rat(1, 2) + Rat(1, 100)) == true);
  CHECK(ds.contains_open(Vec{2.5, 0.5}));
}

TEST_CASE("voxel sets normalize, measure and look up") {
  VoxelSet vs;
  vs.d = 2;
  vs.n = 2;
  for (int x = 2; x >= 0; --x)
    for (int y = 0; y <= 2; ++y) vs.pts.push_back(IVec{x, y});
  vs.pts.push_back(IVec{1, 1}); // duplicate
  vs.normalize();
  CHECK(vs.pts.size() == 9);
  CHECK(std::is_sorted(vs.pts.begin(), vs.pts.end()));
  CHECK(vs.measure_rat() == Rat(9, 4));
  CHECK(vs.contains(IVec{1, 1}));
  CHECK_FALSE(vs.contains(IVec{3, 0}));
}

TEST_CASE("symmetric difference distance is an exact pseudometric") {
  auto block = [](int x0, int x1, int y0, int y1) {
    VoxelSet v;
    v.d = 2;
    v.n = 4;
    for (int x = x0; x <= x1; ++x)
      for (int y = y0; y <= y1; ++y) v.pts.push_back(IVec{x, y});
    v.normalize();
    return v;
  };
  VoxelSet A = block(0, 3, 0, 3);
  VoxelSet B = block(1, 4, 0, 3);
  VoxelSet C = block(0, 3, 2, 5);
  CHECK(symdiff_distance(A, A) == Rat(0));
  CHECK(symdiff_distance(A, B) == symdiff_distance(B, A));
  CHECK(symdiff_distance(A, B) == Rat(8, 16)); // two 4-cell strips
  Rat ab = symdiff_distance(A, B);
  Rat bc = symdiff_distance(B, C);
  Rat ac = symdiff_distance(A, C);
  CHECK(ac <= ab + bc);
  VoxelSet other_scale = A;
  other_scale.n = 8;
  CHECK_THROWS_AS(symdiff_distance(A, other_scale), ConfigError);
}

TEST_CASE("voxel against continuous box matches the closed form") {
  // full 3x3 voxelization at n=2 covers [-1/4, 5/4]^2; against the unit
  // box the overlap is 1, so the symmetric difference is 9/4 + 1 - 2
  VoxelSet vs;
  vs.d = 2;
  vs.n = 2;
  for (int x = 0; x <= 2; ++x)
    for (int y = 0; y <= 2; ++y) vs.pts.push_back(IVec{x, y});
  vs.normalize();
  BoxR unit = box_from_intervals({{0.0, 1.0}, {0.0, 1.0}});
  CHECK(symdiff_voxel_box(vs, unit) == Rat(5, 4));

  // same region as a polygon, resolved by clipping
  std::vector<std::array<Rat, 3>> hs = {{Rat(-1), Rat(0), Rat(0)},
                                        {Rat(1), Rat(0), Rat(1)},
                                        {Rat(0), Rat(-1), Rat(0)},
                                        {Rat(0), Rat(1), Rat(1)}};
  Poly2 square = poly2_from_halfspaces(hs);
  CHECK(symdiff_voxel_poly2(vs, square) == doctest::Approx(1.25).epsilon(1e-12));

  Rat inter = cube_box_overlap(IVec{0, 0}, 2, unit);
  CHECK(inter == Rat(1, 16)); // quarter of the cube at the corner
}

TEST_CASE("facet constructors enforce their shape contracts") {
  BoxR face = box_from_intervals({{0.5, 0.5}, {0.0, 1.0}});
  Facet f = Facet::axis_rect(face, 0, +1);
  CHECK(f.measure == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.normal[0] == 1.0);
  CHECK(f.axis == 0);
  BoxR solid_box = box_from_intervals({{0.0, 1.0}, {0.0, 1.0}});
  CHECK_THROWS_AS(Facet::axis_rect(solid_box, 0, +1), ConfigError);

  RVec a, b;
  a.d = b.d = 2;
  b.c[0] = Rat(1);
  b.c[1] = Rat(1);
  CHECK_THROWS_AS(Facet::segment2(a, b, Vec{1.0, 1.0}), ConfigError); // not unit
  Facet s = Facet::segment2(a, b, Vec{std::sqrt(0.5), -std::sqrt(0.5)});
  CHECK(s.measure == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  CHECK_THROWS_AS(Facet::measure_only(Vec{0.0, 0.0}, Vec{1.0, 0.0}, -1.0), ConfigError);
}

TEST_CASE("facet overlap measures are exact and shape-aware") {
  auto vrect = [](double x, double y0, double y1) {
    return Facet::axis_rect(box_from_intervals({{x, x}, {y0, y1}}), 0, +1);
  };
  CHECK(rect_overlap_measure(vrect(0.5, 0.0, 1.0), vrect(0.5, 0.5, 2.0)) == Rat(1, 2));
  CHECK(rect_overlap_measure(vrect(0.5, 0.0, 1.0), vrect(0.75, 0.0, 1.0)) == Rat(0));
  CHECK(rect_overlap_measure(vrect(0.5, 0.0, 1.0), vrect(0.5, 1.0, 2.0)) == Rat(0));

  auto seg = [](double ax, double ay, double bx, double by, Vec n) {
    RVec a, b;
    a.d = b.d = 2;
    a.c[0] = rat_from_double(ax);
    a.c[1] = rat_from_double(ay);
    b.c[0] = rat_from_double(bx);
    b.c[1] = rat_from_double(by);
    return Facet::segment2(a, b, n);
  };
  Vec nd{std::sqrt(0.5), -std::sqrt(0.5)};
  Facet d1 = seg(0, 0, 1, 1, nd);
  Facet d2 = seg(0.5, 0.5, 2, 2, nd);
  CHECK(seg_overlap_measure(d1, d2) ==
        doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
  Facet off = seg(0, 0.25, 1, 1.25, nd); // parallel, different line
  CHECK(seg_overlap_measure(d1, off) == 0.0);

  Facet mo = Facet::measure_only(Vec{0.0, 0.0}, Vec{1.0, 0.0}, 1.0);
  CHECK_THROWS_AS(facet_overlap_measure(mo, mo), ConfigError);
  CHECK(facet_overlap_measure(vrect(0.0, 0.0, 1.0), d1) == Rat(0));
}

TEST_CASE("polyhedral sets parse, contain and measure") {
  PolyhedralSet ub = PolyhedralSet::from_json(json{{"box", {{0.0, 1.0}, {0.0, 1.0}}}});
  CHECK(ub.has_cells());
  CHECK(ub.volume() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ub.facets.size() == 4);
  CHECK(ub.contains_closed(Vec{1.0, 1.0}));
  CHECK_FALSE(ub.contains_closed(Vec{1.5, 0.5}));
  double per = facet_integral(ub.facets, [](const Vec&) { return 1.0; });
  CHECK(per == doctest::Approx(4.0).epsilon(1e-15));
  // all normals are axis directions, so the l1 weight changes nothing
  double l1 = facet_integral(ub.facets, [](const Vec& v) { return norm1(v); });
  CHECK(l1 == doctest::Approx(4.0).epsilon(1e-15));

  PolyhedralSet tri = PolyhedralSet::from_json(
      json{{"halfspaces", json::array({json{{"a", {-1.0, 0.0}}, {"b", 0.0}},
                                       json{{"a", {0.0, -1.0}}, {"b", 0.0}},
                                       json{{"a", {1.0, 1.0}}, {"b", 1.0}}})}});
  CHECK(tri.volume() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tri.facets.size() == 3);
  double tper = facet_integral(tri.facets, [](const Vec&) { return 1.0; });
  CHECK(tper == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));

  PolyhedralSet surf = PolyhedralSet::from_json(json{
      {"d", 2},
      {"facets", json::array({{{"rect", {{0.5, 0.5}, {0.0, 1.0}}}, {"orient", 1}}})}});
  CHECK_FALSE(surf.has_cells());
  CHECK(surf.facets.size() == 1);
  CHECK_THROWS_AS(surf.volume(), ConfigError);

  CHECK_THROWS_AS(PolyhedralSet::from_json(json{{"nope", 1}}), ConfigError);
}
