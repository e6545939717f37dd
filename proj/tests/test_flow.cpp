#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>

#include "fppcut/errors.hpp"
#include "fppcut/flow.hpp"

using namespace fppcut;
using nlohmann::json;

namespace {

long long ipow_ll(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

long long cut_value(const std::vector<long long>& cap, const std::vector<int32_t>& cut) {
  long long s = 0;
  for (int32_t e : cut) s += cap[e];
  return s;
}

std::vector<long long> unit_caps(const LatticeGraph& g) {
  return std::vector<long long>(g.edges.size(), 1);
}

} // namespace

TEST_CASE("deterministic unit box flows match the column count") {
  for (int n : {2, 3, 4}) {
    LatticeDomain L = build_lattice(DomainSpec::unit_box(2), n);
    FlowResult r = max_flow(L.g, unit_caps(L.g), L.gamma1, L.gamma2);
    CHECK(r.value_int == n + 1);
    CHECK((long long)r.mincut.edges.size() == n + 1);
    CHECK(r.mincut.value_int == r.value_int);
    CHECK(is_cutset(L.g, r.mincut.edges, L.gamma1, L.gamma2));
  }
  LatticeDomain L3 = build_lattice(DomainSpec::unit_box(3), 2);
  FlowResult r3 = max_flow(L3.g, unit_caps(L3.g), L3.gamma1, L3.gamma2);
  CHECK(r3.value_int == ipow_ll(3, 2));
}

TEST_CASE("duality holds replicate by replicate on random fields") {
  LatticeDomain L = build_lattice(DomainSpec::unit_box(2), 5);
  CapacityLaw law = CapacityLaw::two_point(1.0, 2.0, 0.5);
  for (uint64_t k = 0; k < 20; ++k) {
    CapacityField f = sample_field(L.g, law, derive_replicate_seed(404, k));
    FlowResult r = max_flow(L.g, f.cap, L.gamma1, L.gamma2);
    CHECK(r.value_int == cut_value(f.cap, r.mincut.edges));
    CHECK(is_cutset(L.g, r.mincut.edges, L.gamma1, L.gamma2));
    CHECK(std::is_sorted(r.mincut.edges.begin(), r.mincut.edges.end()));
    // the canonical cut is the boundary of the residually reachable set
    CHECK(std::is_sorted(r.mincut.source_side.begin(), r.mincut.source_side.end()));
    std::vector<int32_t> bd = edge_boundary(L.g, r.mincut.source_side);
    CHECK(bd == r.mincut.edges);
    for (int32_t s : L.gamma1)
      CHECK(std::binary_search(r.mincut.source_side.begin(),
                               r.mincut.source_side.end(), s));
    for (int32_t t : L.gamma2)
      CHECK_FALSE(std::binary_search(r.mincut.source_side.begin(),
                                     r.mincut.source_side.end(), t));
  }
}

TEST_CASE("flows conserve mass and respect capacities") {
  LatticeDomain L = build_lattice(DomainSpec::unit_box(2), 4);
  CapacityLaw law = CapacityLaw::two_point(1.0, 3.0, 0.4, 2);
  CapacityField f = sample_field(L.g, law, 77);
  FlowResult r = max_flow(L.g, f.cap, L.gamma1, L.gamma2);
  REQUIRE(r.edge_flow.size() == L.g.edges.size());
  for (size_t e = 0; e < L.g.edges.size(); ++e)
    CHECK(std::llabs(r.edge_flow[e]) <= f.cap[e]);
  long long out_of_sources = 0;
  for (size_t v = 0; v < L.g.verts.size(); ++v) {
    long long net = 0;
    for (int32_t k = L.g.adj_off[v]; k < L.g.adj_off[v + 1]; ++k) {
      int32_t e = L.g.adj_edge[k];
      net += (L.g.edges[e].u == (int32_t)v) ? r.edge_flow[e] : -r.edge_flow[e];
    }
    if (L.in_gamma1[v]) out_of_sources += net;
    else if (!L.in_gamma2[v]) CHECK(net == 0);
  }
  CHECK(out_of_sources == r.value_int);
}

TEST_CASE("is_cutset rejects intact paths and accepts disconnections") {
  LatticeDomain L = build_lattice(DomainSpec::unit_box(2), 2);
  FlowResult r = max_flow(L.g, unit_caps(L.g), L.gamma1, L.gamma2);
  REQUIRE(r.mincut.edges.size() == 3);
  CHECK(is_cutset(L.g, r.mincut.edges, L.gamma1, L.gamma2));
  std::vector<int32_t> holed(r.mincut.edges.begin(), r.mincut.edges.end() - 1);
  CHECK_FALSE(is_cutset(L.g, holed, L.gamma1, L.gamma2));
  CHECK_FALSE(is_cutset(L.g, {}, L.gamma1, L.gamma2));
  std::vector<int32_t> all(L.g.edges.size());
  std::iota(all.begin(), all.end(), 0);
  CHECK(is_cutset(L.g, all, L.gamma1, L.gamma2));
}

TEST_CASE("epsilon cutsets measure slack against the area scale") {
  LatticeDomain L = build_lattice(DomainSpec::unit_box(2), 2);
  CapacityLaw law = CapacityLaw::deterministic(1.0);
  CapacityField f = sample_field(L.g, law, 1);
  FlowResult r = max_flow(L.g, f.cap, L.gamma1, L.gamma2);
  CHECK(is_epsilon_cutset(L.g, f, r.mincut.edges, L.gamma1, L.gamma2, 0.0, r.value_int));

  // pad the source side by one interior vertex: still a cutset, value 4 > 3
  std::vector<int32_t> grown = r.mincut.source_side;
  int32_t extra = -1;
  for (int32_t v = 0; v < (int32_t)L.g.verts.size(); ++v)
    if (!std::binary_search(grown.begin(), grown.end(), v) && !L.in_gamma2[v]) {
      extra = v;
      break;
    }
  REQUIRE(extra >= 0);
  grown.push_back(extra);
  std::sort(grown.begin(), grown.end());
  std::vector<int32_t> wide = edge_boundary(L.g, grown);
  REQUIRE(is_cutset(L.g, wide, L.gamma1, L.gamma2));
  long long v_wide = cut_value(f.cap, wide);
  REQUIRE(v_wide > r.value_int);
  // slack (v_wide - phi) / n^{d-1} with n^{d-1} = 2
  double eps_exact = (double)(v_wide - r.value_int) / 2.0;
  CHECK(is_epsilon_cutset(L.g, f, wide, L.gamma1, L.gamma2, eps_exact, r.value_int));
  CHECK_FALSE(
      is_epsilon_cutset(L.g, f, wide, L.gamma1, L.gamma2, eps_exact - 0.01, r.value_int));

  CHECK_THROWS_AS(
      is_epsilon_cutset(L.g, f, {}, L.gamma1, L.gamma2, 0.0, r.value_int),
      ConfigError);
  CHECK_THROWS_AS(
      is_epsilon_cutset(L.g, f, r.mincut.edges, L.gamma1, L.gamma2, -0.1, r.value_int),
      ConfigError);
}

TEST_CASE("weak duality: every cutset costs at least the maximal flow") {
  LatticeDomain L = build_lattice(DomainSpec::unit_box(2), 4);
  CapacityLaw law = CapacityLaw::two_point(1.0, 2.0, 0.5);
  CapacityField f = sample_field(L.g, law, 2024);
  FlowResult r = max_flow(L.g, f.cap, L.gamma1, L.gamma2);
  // grow the source side by pseudo-random interior vertex sets
  for (uint64_t trial = 0; trial < 10; ++trial) {
    std::vector<int32_t> side = L.gamma1;
    for (int32_t v = 0; v < (int32_t)L.g.verts.size(); ++v)
      if (!L.in_gamma1[v] && !L.in_gamma2[v] && (mix64(trial * 1000 + v) & 1))
        side.push_back(v);
    std::sort(side.begin(), side.end());
    std::vector<int32_t> cut = edge_boundary(L.g, side);
    if (!is_cutset(L.g, cut, L.gamma1, L.gamma2)) continue;
    CHECK(cut_value(f.cap, cut) >= r.value_int);
  }
}

TEST_CASE("the subset-enumeration oracle agrees with the solver") {
  json slab = {
      {"d", 2},
      {"solid", json::array({{{"box", {{0.0, 1.0}, {0.0, 0.5}}}}})},
      {"gamma1", json::array({{{"face", "x0-min"}}})},
      {"gamma2", json::array({{{"face", "x0-max"}}})},
  };
  LatticeDomain Ls = build_lattice(DomainSpec::from_json(slab), 2);
  LatticeDomain Lu = build_lattice(DomainSpec::unit_box(2), 2);
  CapacityLaw tp = CapacityLaw::two_point(1.0, 2.0, 0.5);
  for (const LatticeDomain* L : {&Ls, &Lu}) {
    for (uint64_t k = 0; k < 8; ++k) {
      CapacityField f = sample_field(L->g, tp, derive_replicate_seed(55, k));
      FlowResult fast = max_flow(L->g, f.cap, L->gamma1, L->gamma2);
      CutSet slow = brute_force_min_cut(L->g, f.cap, L->gamma1, L->gamma2);
      CHECK(fast.value_int == slow.value_int);
      CHECK(slow.value_int == cut_value(f.cap, slow.edges));
      CHECK(is_cutset(L->g, slow.edges, L->gamma1, L->gamma2));
      CHECK(std::is_sorted(slow.edges.begin(), slow.edges.end()));
    }
  }

  // guards: 24 edges or 65+ vertices are out of the oracle's reach
  LatticeDomain big = build_lattice(DomainSpec::unit_box(2), 3);
  REQUIRE(big.g.edges.size() == 24);
  CHECK_THROWS_AS(brute_force_min_cut(big.g, unit_caps(big.g), big.gamma1, big.gamma2),
                  CapacityError);
}

TEST_CASE("minimum cardinality cuts match closed forms") {
  for (int n : {2, 4}) {
    LatticeDomain L = build_lattice(DomainSpec::unit_box(2), n);
    CHECK(min_cardinality_cut(L.g, L.gamma1, L.gamma2) == n + 1);
  }
  CylinderSpec cyl;
  cyl.center = Vec{0.0, 0.5};
  cyl.v = Vec::axis(2, 0);
  cyl.side = {1.0};
  cyl.height = 1.0;
  CylinderLattice C = build_cylinder(cyl, 4);
  CHECK(min_cardinality_cut(C.g, C.tprime, C.bprime) == 5);
}

TEST_CASE("terminal validation rejects malformed problems") {
  LatticeDomain L = build_lattice(DomainSpec::unit_box(2), 2);
  std::vector<long long> cap = unit_caps(L.g);
  CHECK_THROWS_AS(max_flow(L.g, cap, {}, L.gamma2), ConfigError);
  CHECK_THROWS_AS(max_flow(L.g, cap, L.gamma1, {}), ConfigError);
  CHECK_THROWS_AS(max_flow(L.g, cap, L.gamma1, L.gamma1), ConfigError);
  CHECK_THROWS_AS(max_flow(L.g, cap, {-1}, L.gamma2), ConfigError);
  std::vector<long long> short_cap(cap.begin(), cap.end() - 1);
  CHECK_THROWS_AS(max_flow(L.g, short_cap, L.gamma1, L.gamma2), ConfigError);
}

TEST_CASE("disconnected terminals yield zero flow and the empty cut") {
  json two = {
      {"d", 2},
      {"solid", json::array({{{"box", {{0.0, 1.0}, {0.0, 1.0}}}},
                             {{"box", {{3.0, 4.0}, {0.0, 1.0}}}}})},
      {"gamma1", json::array({{{"face", "x0-min"}}})},
      {"gamma2", json::array({{{"rect", {{4.0, 4.0}, {0.0, 1.0}}}, {"orient", 1}}})},
  };
  LatticeDomain L = build_lattice(DomainSpec::from_json(two), 2);
  FlowResult r = max_flow(L.g, unit_caps(L.g), L.gamma1, L.gamma2);
  CHECK(r.value_int == 0);
  CHECK(r.mincut.edges.empty());
  CHECK(is_cutset(L.g, {}, L.gamma1, L.gamma2));
}

TEST_CASE("reachability respects banned edges") {
  LatticeDomain L = build_lattice(DomainSpec::unit_box(2), 2);
  std::vector<int32_t> all = reachable_from(L.g, L.gamma1, {});
  CHECK(all.size() == L.g.verts.size());
  FlowResult r = max_flow(L.g, unit_caps(L.g), L.gamma1, L.gamma2);
  std::vector<int32_t> cutoff = reachable_from(L.g, L.gamma1, r.mincut.edges);
  CHECK(cutoff == r.mincut.source_side);
  CHECK(uncuttable_capacity({1, 2, 3}) == 7);
}
