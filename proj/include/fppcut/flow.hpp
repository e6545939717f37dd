// Exact maximal flow / minimal cutset machinery on lattice graphs.
//
// Capacities arrive as integers (value * D); every flow and cut value
// here is exact.  The minimal cutset reported by max_flow is canonical:
// the edge boundary of the set of vertices residually reachable from
// the sources after a maximal flow (the inclusion-minimal source-side
// minimum cut).  The subset-enumeration oracle is deliberately
// independent of the augmenting-path solver so the two can check each
// other on small instances.
#pragma once

#include <cstdint>
#include <vector>

#include "fppcut/capacity.hpp"
#include "fppcut/lattice.hpp"

namespace fppcut {

struct CutSet {
  std::vector<int32_t> edges;       // ascending canonical edge indices
  long long value_int = 0;          // sum of capacities, * D
  std::vector<int32_t> source_side; // vertices residually reachable from sources
};

struct FlowResult {
  long long value_int = 0; // phi * D
  CutSet mincut;
  // net flow per edge, positive along the canonical +e_axis direction
  std::vector<long long> edge_flow;
};

// effectively-infinite capacity for terminal attachments / uncuttable
// edges: one more than everything that can ever cross a finite cut
long long uncuttable_capacity(const std::vector<long long>& cap);

// Maximal flow between vertex sets.  Preconditions: sources and sinks
// nonempty and disjoint.  A disconnected instance yields value 0 and an
// empty cut.  Throws InvariantError if the extracted cut value ever
// disagrees with the flow value (it cannot, by duality).
FlowResult max_flow(const LatticeGraph& g, const std::vector<long long>& cap,
                    const std::vector<int32_t>& sources,
                    const std::vector<int32_t>& sinks);

// does removing `cut` disconnect every source from every sink?
bool is_cutset(const LatticeGraph& g, const std::vector<int32_t>& cut,
               const std::vector<int32_t>& sources, const std::vector<int32_t>& sinks);

// cutset with V(cut) <= phi + eps * n^{d-1}; requires eps >= 0 and a
// genuine cutset (error otherwise); phi_int is the exact maximal flow
bool is_epsilon_cutset(const LatticeGraph& g, const CapacityField& field,
                       const std::vector<int32_t>& cut,
                       const std::vector<int32_t>& sources,
                       const std::vector<int32_t>& sinks, double eps,
                       long long phi_int);

// edges with exactly one endpoint in the (sorted) vertex set
std::vector<int32_t> edge_boundary(const LatticeGraph& g,
                                   const std::vector<int32_t>& verts);

// vertices reachable from `start` without crossing `banned` edges
std::vector<int32_t> reachable_from(const LatticeGraph& g,
                                    const std::vector<int32_t>& start,
                                    const std::vector<int32_t>& banned);

// Exhaustive oracle: minimum-capacity edge subset that is a cutset,
// ties broken by lexicographic comparison of the ascending edge lists.
// Guarded to |edges| <= 22 and |verts| <= 64.
CutSet brute_force_min_cut(const LatticeGraph& g, const std::vector<long long>& cap,
                           const std::vector<int32_t>& sources,
                           const std::vector<int32_t>& sinks);

// minimum NUMBER of edges separating sources from sinks (unit capacities)
long long min_cardinality_cut(const LatticeGraph& g,
                              const std::vector<int32_t>& sources,
                              const std::vector<int32_t>& sinks);

} // namespace fppcut
