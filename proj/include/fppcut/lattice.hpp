// Discrete side: the rescaled lattice Z^d/n restricted to a domain, a
// cylinder, or a ball, together with the boundary vertex families the
// flow problems are posed between.
//
// Membership rules follow the construction exactly, including which
// comparisons are strict:
//   Omega_n   = { x in Z^d/n : d_inf(x, Omega) < 1/n }
//   Gamma_n   = { x in Omega_n : some lattice neighbor is outside Omega_n }
//   Gamma_n^i = { x in Gamma_n : d_inf(x, Gamma^i) < 1/n
//                                and d_inf(x, Gamma^{3-i}) >= 1/n }
//   Pi_n      = edges with both endpoints in Omega_n
// Cylinder boundary halves use the strict sign rule (z - x).v > 0 / < 0
// with z the base center; ball boundary halves test the sign of
// (z - x).v on the outside neighbor z with >= 0 / < 0, x the center.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fppcut/geometry.hpp"
#include "fppcut/vec.hpp"

namespace fppcut {

struct Limits {
  long long max_edges = 500000; // vertices are budgeted against this too
};

struct Edge {
  int32_t u = -1, v = -1; // vertex indices; verts[u] is the lexicographic base
  int8_t axis = -1;       // verts[v] = verts[u] + e_axis
};

struct LatticeGraph {
  int d = 0;
  int n = 1;
  std::vector<IVec> verts; // sorted lexicographically
  std::vector<Edge> edges; // sorted by (base vertex, axis)
  std::vector<int32_t> adj_off, adj_edge; // CSR vertex -> incident edges

  int32_t find_vertex(const IVec& z) const;
  bool has_vertex(const IVec& z) const { return find_vertex(z) >= 0; }
  Vec edge_center(int32_t e) const; // midpoint of the edge segment
  int32_t other_end(int32_t e, int32_t at) const {
    return edges[e].u == at ? edges[e].v : edges[e].u;
  }
};

// ------------------------------------------------------------- domains

struct LatticeDomain {
  DomainSpec spec;
  LatticeGraph g;
  std::vector<int32_t> gamma, gamma1, gamma2; // sorted vertex indices
  std::vector<uint8_t> in_gamma1, in_gamma2;  // per-vertex flags
};

LatticeDomain build_lattice(const DomainSpec& spec, int n, const Limits& lim = {});

// ----------------------------------------------------------- cylinders

// cyl(A, h): A is a (d-1)-rectangle with center `center`, side lengths
// `side` along the orthonormal frame, normal direction v.
struct CylinderSpec {
  Vec center;
  Vec v;                  // unit, normal to A
  std::vector<Vec> frame; // d-1 orthonormal in-plane axes (generated if empty)
  std::vector<double> side;
  double height = 0; // cyl extends center + t*v for t in [-h, h]
};

struct CylinderLattice {
  CylinderSpec spec;
  LatticeGraph g;
  std::vector<int32_t> tprime, bprime; // (z-x).v > 0 side / < 0 side
  double base_measure = 0;             // H^{d-1}(A)
  bool exact_axis = false;             // axis-aligned exact-arithmetic path
};

CylinderLattice build_cylinder(const CylinderSpec& spec, int n, const Limits& lim = {});

// --------------------------------------------------------------- balls

struct BallSpec {
  Vec center;
  double radius = 0;
  Vec v;                        // unit orientation for the +/- split
  double slab_halfheight = -1;  // >= 0 keeps only |(y-x).v| <= value
};

struct BallRegion {
  BallSpec spec;
  LatticeGraph g;                      // B(x,r) cap Z^d/n, edges inside the ball
  std::vector<int32_t> upper, lower;   // discrete +/- boundary halves
};

BallRegion build_ball(const BallSpec& spec, int n, const Limits& lim = {});

// count of lattice points of the closed lower half-ball
// { y in B(x,r) : (y-x).v < 0 } at scale n
long long halfball_lower_count(const BallSpec& spec, int n);

// --------------------------------------------------------------- utils

// rough vertex/edge counts for budget screening without building
void estimate_lattice_sizes(const DomainSpec& spec, int n,
                            long long& verts, long long& edges);

// voxelization {z : z/n in open domain}
VoxelSet voxelize_open(const DomainSpec& spec, int n);

} // namespace fppcut
