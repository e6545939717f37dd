#include "fppcut/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

#include <boost/math/distributions/binomial.hpp>

#include "fppcut/errors.hpp"

namespace fppcut {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kZ95 = 1.959963984540054; // two-sided 95% normal quantile
const double kInf = std::numeric_limits<double>::infinity();

double ipow(double b, int e) {
  double r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

ConvergenceRow reduce_row(int n, const std::vector<double>& xs) {
  ConvergenceRow row;
  row.n = n;
  row.reps = (long long)xs.size();
  double s = 0;
  for (double x : xs) s += x;
  row.mean = s / (double)xs.size();
  if (xs.size() >= 2) {
    double q = 0;
    for (double x : xs) q += (x - row.mean) * (x - row.mean);
    row.stddev = std::sqrt(q / (double)(xs.size() - 1));
  }
  double half = kZ95 * row.stddev / std::sqrt((double)xs.size());
  row.ci_lo = row.mean - half;
  row.ci_hi = row.mean + half;
  return row;
}

// nearest-rank quantile of an ascending vector
double quantile_sorted(const std::vector<double>& s, double q) {
  if (s.empty()) return 0;
  long long idx = (long long)std::ceil(q * (double)s.size()) - 1;
  if (idx < 0) idx = 0;
  if (idx >= (long long)s.size()) idx = (long long)s.size() - 1;
  return s[(size_t)idx];
}

uint64_t subseed_for_n(uint64_t seed, int n) {
  return derive_replicate_seed(seed, (uint64_t)n);
}

void require_reps(long long reps) {
  if (reps < 1) throw ConfigError("replicate count must be >= 1");
}

} // namespace

double alpha_ball_volume(int k) {
  if (k < 0) throw ConfigError("alpha_ball_volume: negative dimension");
  switch (k) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return kPi;
    case 3: return 4.0 * kPi / 3.0;
    case 4: return kPi * kPi / 2.0;
    default: return std::pow(kPi, k / 2.0) / std::tgamma(k / 2.0 + 1.0);
  }
}

BinomCI clopper_pearson(long long hits, long long reps, double conf) {
  if (reps < 1) throw ConfigError("clopper_pearson: reps must be >= 1");
  if (hits < 0 || hits > reps) throw ConfigError("clopper_pearson: hits out of range");
  if (!(conf > 0 && conf < 1)) throw ConfigError("clopper_pearson: conf must be in (0,1)");
  using boost::math::binomial_distribution;
  double a = (1.0 - conf) / 2.0;
  BinomCI ci;
  ci.lo = hits == 0 ? 0.0
                    : binomial_distribution<double>::find_lower_bound_on_p(
                          (double)reps, (double)hits, a);
  ci.hi = hits == reps ? 1.0
                       : binomial_distribution<double>::find_upper_bound_on_p(
                             (double)reps, (double)hits, a);
  return ci;
}

void parallel_for_replicates(long long reps, int threads,
                             const std::function<void(long long)>& body) {
  require_reps(reps);
  long long nt = threads <= 0 ? 1 : threads;
  if (nt > reps) nt = reps;
  if (nt == 1) {
    for (long long k = 0; k < reps; ++k) body(k);
    return;
  }
  std::atomic<long long> next{0};
  std::atomic<bool> stop{false};
  std::mutex err_mu;
  long long err_idx = -1;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve((size_t)nt);
  for (long long t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (;;) {
        if (stop.load(std::memory_order_relaxed)) return;
        long long k = next.fetch_add(1, std::memory_order_relaxed);
        if (k >= reps) return;
        try {
          body(k);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (err_idx < 0 || k < err_idx) {
            err_idx = k;
            err = std::current_exception();
          }
          stop.store(true, std::memory_order_relaxed);
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

// ------------------------------------------------------ flow constant

FlowConstantResult estimate_flow_constant(const CylinderSpec& cyl,
                                          const CapacityLaw& law,
                                          const std::vector<int>& n_list,
                                          long long reps, uint64_t seed,
                                          int threads, const Limits& lim) {
  require_reps(reps);
  if (n_list.empty()) throw ConfigError("estimate_flow_constant: empty n list");
  FlowConstantResult out;
  int best_n = -1;
  for (int n : n_list) {
    CylinderLattice cg = build_cylinder(cyl, n, lim);
    if (cg.tprime.empty() || cg.bprime.empty())
      throw ConfigError("cylinder boundary half empty at n=" + std::to_string(n));
    double scale = cg.base_measure * ipow((double)n, cg.g.d - 1);
    uint64_t sub = subseed_for_n(seed, n);
    std::vector<double> norm((size_t)reps);
    parallel_for_replicates(reps, threads, [&](long long k) {
      CapacityField f = sample_field(cg.g, law, derive_replicate_seed(sub, (uint64_t)k));
      FlowResult r = max_flow(cg.g, f.cap, cg.tprime, cg.bprime);
      norm[(size_t)k] = (double)r.value_int / ((double)law.D * scale);
    });
    ConvergenceRow row = reduce_row(n, norm);
    out.series.rows.push_back(row);
    if (n > best_n) {
      best_n = n;
      out.nu_hat = row.mean;
      out.nu_lo = row.ci_lo;
      out.nu_hi = row.ci_hi;
    }
  }
  return out;
}

// --------------------------------------------------- lower-tail rates

RateCurveResult estimate_lower_tail_rate(const CylinderSpec& cyl,
                                         const CapacityLaw& law, int n,
                                         const std::vector<double>& lambda_grid,
                                         long long reps, uint64_t seed,
                                         int threads, const Limits& lim) {
  require_reps(reps);
  if (lambda_grid.empty()) throw ConfigError("rate curve: empty lambda grid");
  for (size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!std::isfinite(lambda_grid[i]) || lambda_grid[i] < 0)
      throw ConfigError("rate curve: lambdas must be finite and nonnegative");
    if (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))
      throw ConfigError("rate curve: lambda grid must be strictly ascending");
  }

  CylinderLattice cg = build_cylinder(cyl, n, lim);
  if (cg.tprime.empty() || cg.bprime.empty())
    throw ConfigError("cylinder boundary half empty at n=" + std::to_string(n));

  RateCurveResult out;
  out.d = cg.g.d;
  out.n = n;
  out.direction = cg.spec.v;
  out.base_area = cg.base_measure;
  out.min_card = min_cardinality_cut(cg.g, cg.tprime, cg.bprime);
  out.delta_int = law.delta_int;
  out.D = law.D;

  double scale = cg.base_measure * ipow((double)n, cg.g.d - 1);
  long long floor_int = law.delta_int * out.min_card;
  auto structural = [&](double lam) {
    return lam * scale * (double)law.D < (double)floor_int;
  };

  bool any_sampled = false;
  for (double lam : lambda_grid)
    if (!structural(lam)) any_sampled = true;

  uint64_t sub = subseed_for_n(seed, n);
  if (any_sampled) {
    out.tau_int.assign((size_t)reps, 0);
    parallel_for_replicates(reps, threads, [&](long long k) {
      CapacityField f = sample_field(cg.g, law, derive_replicate_seed(sub, (uint64_t)k));
      FlowResult r = max_flow(cg.g, f.cap, cg.tprime, cg.bprime);
      if (r.value_int < floor_int) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "structural floor violated: tau=%lld < %lld (replicate %lld)",
                      r.value_int, floor_int, k);
        throw InvariantError(buf);
      }
      out.tau_int[(size_t)k] = r.value_int;
    });
  }

  long long prev_hits = 0;
  for (double lam : lambda_grid) {
    RateEstimate pt;
    pt.lambda = lam;
    pt.n = n;
    pt.reps = reps;
    pt.area_scale = scale;
    pt.structurally_impossible = structural(lam);
    if (!pt.structurally_impossible) {
      double thr = lam * scale * (double)law.D;
      long long hits = 0;
      for (long long t : out.tau_int)
        if ((double)t <= thr) ++hits;
      pt.hits = hits;
    }
    if (pt.hits < prev_hits)
      throw InvariantError("rate curve: hit count decreased along the grid");
    prev_hits = pt.hits;

    if (pt.structurally_impossible) {
      // p = 0 proven: the whole interval collapses and the rate is infinite
      pt.p_hat = pt.p_lo = pt.p_hi = 0;
      pt.j_hat = pt.j_lo = pt.j_hi = kInf;
    } else {
      pt.p_hat = (double)pt.hits / (double)reps;
      BinomCI ci = clopper_pearson(pt.hits, reps);
      pt.p_lo = ci.lo;
      pt.p_hi = ci.hi;
      pt.j_hat = pt.hits > 0 ? -std::log(pt.p_hat) / scale : kInf;
      pt.j_lo = -std::log(pt.p_hi) / scale; // p_hi > 0 always once sampled
      pt.j_hi = pt.hits > 0 ? -std::log(pt.p_lo) / scale : kInf;
    }
    out.points.push_back(pt);
  }
  return out;
}

// -------------------------------------------------------- domain flow

DomainFlowResult estimate_domain_flow(const DomainSpec& spec,
                                      const CapacityLaw& law,
                                      const std::vector<int>& n_list,
                                      long long reps, uint64_t seed,
                                      const std::vector<Solid>& panel,
                                      int threads, const Limits& lim) {
  require_reps(reps);
  if (n_list.empty()) throw ConfigError("estimate_domain_flow: empty n list");
  for (const Solid& s : panel)
    if (s.kind == Solid::Kind::Ball)
      throw ConfigError("competitor panel members must be polyhedral");

  DomainFlowResult out;
  int best_n = -1;
  for (int n : n_list) {
    LatticeDomain dom = build_lattice(spec, n, lim);
    uint64_t sub = subseed_for_n(seed, n);
    double nd1 = ipow((double)n, dom.g.d - 1);

    std::vector<DomainFlowReplicate> rs((size_t)reps);
    parallel_for_replicates(reps, threads, [&](long long k) {
      CapacityField f = sample_field(dom.g, law, derive_replicate_seed(sub, (uint64_t)k));
      FlowResult r = max_flow(dom.g, f.cap, dom.gamma1, dom.gamma2);
      EmpiricalMeasure mu = empirical_measure(dom.g, r.mincut.edges, f);
      if (mu.total_int != r.value_int) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "cut measure mass %lld disagrees with flow value %lld",
                      mu.total_int, r.value_int);
        throw InvariantError(buf);
      }
      DomainFlowReplicate rep;
      rep.phi_int = r.value_int;
      rep.cut_card = (long long)r.mincut.edges.size();
      rep.card_ratio = (double)rep.cut_card / nd1;
      if (!panel.empty()) {
        VoxelSet R = continuous_representation(dom.g, reachable_set(dom, r.mincut.edges));
        rep.panel_dist.reserve(panel.size());
        for (const Solid& s : panel) {
          if (s.kind == Solid::Kind::Box)
            rep.panel_dist.push_back(symdiff_voxel_box(R, s.box).to_double());
          else
            rep.panel_dist.push_back(symdiff_voxel_poly2(R, s.poly));
        }
      }
      rs[(size_t)k] = std::move(rep);
    });

    std::vector<double> norm((size_t)reps);
    for (size_t k = 0; k < rs.size(); ++k)
      norm[k] = (double)rs[k].phi_int / ((double)law.D * nd1);
    ConvergenceRow row = reduce_row(n, norm);
    out.series.rows.push_back(row);

    DomainFlowPerN pn;
    pn.n = n;
    std::vector<double> zs((size_t)reps);
    for (size_t k = 0; k < rs.size(); ++k) zs[k] = rs[k].card_ratio;
    std::sort(zs.begin(), zs.end());
    pn.card_ratio_q50 = quantile_sorted(zs, 0.5);
    pn.card_ratio_q90 = quantile_sorted(zs, 0.9);
    pn.card_ratio_max = zs.back();
    pn.reps = std::move(rs);
    out.per_n.push_back(std::move(pn));

    if (n > best_n) {
      best_n = n;
      out.phi_hat = row.mean;
    }
  }
  return out;
}

// -------------------------------------------------------- ball events

namespace {

double dist2_to(const IVec& z, int n, const Vec& c) {
  double s = 0;
  for (int i = 0; i < c.d; ++i) {
    double t = (double)z[i] / (double)n - c[i];
    s += t * t;
  }
  return s;
}

double height_of(const IVec& z, int n, const Vec& c, const Vec& v) {
  double s = 0;
  for (int i = 0; i < c.d; ++i) s += ((double)z[i] / (double)n - c[i]) * v[i];
  return s;
}

void fill_csr(LatticeGraph& g) {
  g.adj_off.assign(g.verts.size() + 1, 0);
  for (const Edge& e : g.edges) {
    ++g.adj_off[(size_t)e.u + 1];
    ++g.adj_off[(size_t)e.v + 1];
  }
  for (size_t i = 1; i < g.adj_off.size(); ++i) g.adj_off[i] += g.adj_off[i - 1];
  g.adj_edge.assign(g.edges.empty() ? 0 : (size_t)g.adj_off.back(), 0);
  std::vector<int32_t> pos(g.adj_off.begin(), g.adj_off.end() - 1);
  for (int32_t e = 0; e < (int32_t)g.edges.size(); ++e) {
    g.adj_edge[(size_t)pos[g.edges[e].u]++] = e;
    g.adj_edge[(size_t)pos[g.edges[e].v]++] = e;
  }
}

} // namespace

GbarResult detect_Gbar_event(const LatticeDomain& dom, const CapacityField& field,
                             const Vec& center, double radius, const Vec& v,
                             double delta, double zeta) {
  const LatticeGraph& g = dom.g;
  if (field.cap.size() != g.edges.size())
    throw ConfigError("detect_Gbar_event: field does not match the domain graph");
  if (center.d != g.d || v.d != g.d)
    throw ConfigError("detect_Gbar_event: dimension mismatch");
  if (!(radius > 0)) throw ConfigError("detect_Gbar_event: radius must be positive");
  if (std::fabs(norm2(v) - 1.0) > 1e-9)
    throw ConfigError("detect_Gbar_event: v must be unit");
  if (delta < 0 || zeta < 0)
    throw ConfigError("detect_Gbar_event: delta and zeta must be nonnegative");

  int n = g.n, d = g.d;
  GbarResult out;
  out.threshold =
      zeta * alpha_ball_volume(d - 1) * ipow(radius, d - 1) * ipow((double)n, d - 1);

  const double r2tol = radius * radius + 1e-12;
  std::vector<int32_t> ball_vs;
  std::vector<uint8_t> in_ball(g.verts.size(), 0);
  for (int32_t i = 0; i < (int32_t)g.verts.size(); ++i)
    if (dist2_to(g.verts[i], n, center) <= r2tol) {
      in_ball[i] = 1;
      ball_vs.push_back(i);
    }
  if (ball_vs.empty()) {
    out.diagnostic = "ball contains no domain vertices";
    return out;
  }

  // discrete ball boundary halves, via free-lattice outside neighbors
  std::vector<uint8_t> plus(g.verts.size(), 0), minus(g.verts.size(), 0);
  for (int32_t i : ball_vs) {
    const IVec& z = g.verts[i];
    for (int axis = 0; axis < d; ++axis)
      for (int s = -1; s <= 1; s += 2) {
        IVec z2 = ivec_shift(z, axis, s);
        if (dist2_to(z2, n, center) <= r2tol) continue;
        if (height_of(z2, n, center, v) >= 0)
          plus[i] = 1;
        else
          minus[i] = 1;
      }
  }
  for (int32_t i : ball_vs)
    if (plus[i] && minus[i]) {
      out.diagnostic = "upper and lower ball boundaries share a vertex";
      return out;
    }

  // subgraph on the ball vertices, domain edge order preserved
  LatticeGraph sub;
  sub.d = d;
  sub.n = n;
  std::vector<int32_t> remap(g.verts.size(), -1);
  for (size_t i = 0; i < ball_vs.size(); ++i) {
    remap[ball_vs[i]] = (int32_t)i;
    sub.verts.push_back(g.verts[ball_vs[i]]);
  }
  std::vector<int32_t> orig_edge;
  for (int32_t e = 0; e < (int32_t)g.edges.size(); ++e) {
    const Edge& ed = g.edges[e];
    if (in_ball[ed.u] && in_ball[ed.v]) {
      sub.edges.push_back(Edge{remap[ed.u], remap[ed.v], ed.axis});
      orig_edge.push_back(e);
    }
  }
  fill_csr(sub);

  std::vector<int32_t> sources, sinks;
  for (int32_t i : ball_vs) {
    if (minus[i]) {
      sinks.push_back(remap[i]);
      continue;
    }
    if (plus[i] || dom.in_gamma1[i] || dom.in_gamma2[i]) sources.push_back(remap[i]);
  }
  if (sources.empty() || sinks.empty()) {
    out.diagnostic = "empty terminal set";
    return out;
  }

  // off-slab edges are priced uncuttable
  const double hmax = 2.0 * delta * radius + 1e-12;
  std::vector<uint8_t> in_slab(sub.verts.size(), 0);
  for (size_t i = 0; i < sub.verts.size(); ++i)
    in_slab[i] = std::fabs(height_of(sub.verts[i], n, center, v)) <= hmax ? 1 : 0;

  std::vector<long long> caps(sub.edges.size(), 0);
  long long cut_total = 0;
  long long n_cuttable = 0;
  for (size_t e = 0; e < sub.edges.size(); ++e)
    if (in_slab[sub.edges[e].u] && in_slab[sub.edges[e].v]) {
      caps[e] = field.cap[orig_edge[e]];
      cut_total += caps[e];
      ++n_cuttable;
    }
  if (n_cuttable == 0) {
    out.diagnostic = "empty slab subgraph";
    return out;
  }
  const long long inf = cut_total + 1;
  for (size_t e = 0; e < sub.edges.size(); ++e)
    if (!(in_slab[sub.edges[e].u] && in_slab[sub.edges[e].v])) caps[e] = inf;

  FlowResult res = max_flow(sub, caps, sources, sinks);
  if (res.value_int >= inf) return out; // no slab-contained cutset exists

  out.cut_value_int = res.value_int;
  out.event = (double)res.value_int <= out.threshold * (double)field.D;
  out.cut_edges.reserve(res.mincut.edges.size());
  for (int32_t e : res.mincut.edges) out.cut_edges.push_back(orig_edge[e]);
  return out;
}

GResult detect_G_event(const BallRegion& ball, const CapacityField& field,
                       double delta, double zeta) {
  const LatticeGraph& g = ball.g;
  if (field.cap.size() != g.edges.size())
    throw ConfigError("detect_G_event: field does not match the ball graph");
  if (delta < 0 || zeta < 0)
    throw ConfigError("detect_G_event: delta and zeta must be nonnegative");

  const int n = g.n, d = g.d;
  const double r = ball.spec.radius;
  GResult out;
  out.card_bound = 4.0 * delta * alpha_ball_volume(d) * ipow(r, d) * ipow((double)n, d);
  out.value_bound =
      zeta * alpha_ball_volume(d - 1) * ipow(r, d - 1) * ipow((double)n, d - 1);
  const double vbD = out.value_bound * (double)field.D;

  std::vector<uint8_t> lowhalf(g.verts.size(), 0);
  long long card_low = 0;
  for (size_t i = 0; i < g.verts.size(); ++i)
    if (height_of(g.verts[i], n, ball.spec.center, ball.spec.v) < 0) {
      lowhalf[i] = 1;
      ++card_low;
    }
  const long long card_all = (long long)g.verts.size();

  auto all_verts = [&] {
    std::vector<int32_t> w((size_t)card_all);
    for (int32_t i = 0; i < card_all; ++i) w[(size_t)i] = i;
    return w;
  };
  auto low_verts = [&] {
    std::vector<int32_t> w;
    w.reserve((size_t)card_low);
    for (int32_t i = 0; i < card_all; ++i)
      if (lowhalf[(size_t)i]) w.push_back(i);
    return w;
  };

  // trivial witnesses: empty set and the full ball have no edge boundary
  // inside B, so only the cardinality condition matters
  if ((double)card_low <= out.card_bound) {
    out.state = Detection::True;
    out.note = "witness: empty set";
    return out;
  }
  if ((double)(card_all - card_low) <= out.card_bound) {
    out.state = Detection::True;
    out.note = "witness: full ball";
    out.witness = all_verts();
    return out;
  }

  // the exact lower half-ball has zero symmetric difference
  long long cross = 0;
  long long cmax = 0;
  for (size_t e = 0; e < g.edges.size(); ++e) {
    if (lowhalf[g.edges[e].u] != lowhalf[g.edges[e].v]) cross += field.cap[e];
    cmax = std::max(cmax, field.cap[e]);
  }
  if ((double)cross <= vbD) {
    out.state = Detection::True;
    out.note = "witness: lower half-ball";
    out.witness = low_verts();
    return out;
  }

  bool terminals_ok = !ball.lower.empty() && !ball.upper.empty();
  if (terminals_ok) {
    std::vector<int32_t> inter;
    std::set_intersection(ball.lower.begin(), ball.lower.end(), ball.upper.begin(),
                          ball.upper.end(), std::back_inserter(inter));
    terminals_ok = inter.empty();
  }
  if (terminals_ok) {
    out.min_card = min_cardinality_cut(g, ball.lower, ball.upper);
    FlowResult res = max_flow(g, field.cap, ball.lower, ball.upper);
    long long sd = 0;
    std::vector<uint8_t> inU(g.verts.size(), 0);
    for (int32_t i : res.mincut.source_side) inU[(size_t)i] = 1;
    for (size_t i = 0; i < g.verts.size(); ++i)
      if (inU[i] != lowhalf[i]) ++sd;
    if ((double)sd <= out.card_bound && (double)res.value_int <= vbD) {
      out.state = Detection::True;
      out.note = "witness: minimum cut source side";
      out.witness = res.mincut.source_side;
      return out;
    }
  }

  // Provable exclusion: any U within the cardinality bound of the lower
  // half-ball keeps every crossing edge not incident to the flipped
  // vertices in its boundary, so
  //   V(boundary of U) >= cross - |flips| * 2d * max capacity.
  // When even that floor exceeds the value bound, no admissible U exists
  // (the empty/full escapes were already excluded above).
  double kfloor = std::floor(out.card_bound);
  double residual = (double)cross - kfloor * 2.0 * (double)d * (double)cmax;
  if (vbD < residual) {
    out.state = Detection::False;
    out.note = "capacity floor excludes every candidate within the cardinality bound";
    return out;
  }

  out.state = Detection::Unknown;
  out.note = "no witness verified and the capacity floor is inconclusive";
  return out;
}

// ----------------------------------------------------- triangle check

TriangleReport check_weak_triangle(const RateCurveResult& at_vA,
                                   const RateCurveResult& at_vB,
                                   const RateCurveResult& at_vC,
                                   const TriangleSides& sides) {
  const double bc = sides.bc, ac = sides.ac, ab = sides.ab;
  for (double s : {bc, ac, ab})
    if (!std::isfinite(s) || !(s > 0))
      throw ConfigError("triangle check: side lengths must be positive and finite");
  if (!(bc < ac + ab && ac < ab + bc && ab < bc + ac))
    throw ConfigError("triangle check: degenerate triangle");
  if (at_vA.direction == at_vB.direction && at_vB.direction == at_vC.direction)
    throw ConfigError("triangle check: the three directions coincide");

  std::vector<double> xs, ys; // grid and CI lower bounds of the A-curve
  for (const RateEstimate& p : at_vA.points) {
    xs.push_back(p.lambda);
    ys.push_back(p.j_lo);
  }

  auto interp_lo = [&](double x, double& y) {
    if (xs.empty() || x < xs.front() || x > xs.back()) return false;
    size_t hi = (size_t)(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    if (hi == 0) hi = 1;
    if (hi >= xs.size()) hi = xs.size() - 1;
    size_t lo = hi - 1;
    if (xs.size() == 1) {
      y = ys[0];
      return std::isfinite(y);
    }
    if (!std::isfinite(ys[lo]) || !std::isfinite(ys[hi])) return false;
    double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    y = ys[lo] + t * (ys[hi] - ys[lo]);
    return true;
  };

  TriangleReport rep;
  for (const RateEstimate& b : at_vB.points)
    for (const RateEstimate& c : at_vC.points) {
      double x = (b.lambda * ac + c.lambda * ab) / bc;
      double ja = 0;
      if (!std::isfinite(b.j_hi) || !std::isfinite(c.j_hi) || !interp_lo(x, ja)) {
        ++rep.skipped;
        continue;
      }
      ++rep.checked;
      double lhs = bc * ja;
      double rhs = ac * b.j_hi + ab * c.j_hi;
      if (lhs > rhs) {
        ++rep.violations;
        rep.violating.push_back({b.lambda, c.lambda, x});
      }
    }
  return rep;
}

// -------------------------------------------------- minimality checks

MinimalityReport check_minimality_panel(const ContinuousCutset& E,
                                        const std::vector<double>& f,
                                        const std::vector<ContinuousCutset>& panel,
                                        const DirectionWeight& nu, double tol) {
  if (tol < 0) throw ConfigError("minimality check: negative tolerance");
  MinimalityReport rep;
  rep.lhs = capa(E, f);
  for (const ContinuousCutset& F : panel) {
    MinimalityEntry ent;
    ent.rhs = minimality_rhs(E, f, F, nu);
    ent.certifies_nonminimal = rep.lhs > ent.rhs + tol;
    rep.nonminimal = rep.nonminimal || ent.certifies_nonminimal;
    rep.entries.push_back(ent);
  }
  return rep;
}

} // namespace fppcut
