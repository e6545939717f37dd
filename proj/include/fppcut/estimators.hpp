// Statistical layer: Monte Carlo estimators for the flow constant, the
// lower-tail rate curve, domain flows with cut-geometry summaries, the
// two local ball events, and the finite-sample consistency checks
// (weak triangle inequality, minimality against a competitor panel).
//
// Reproducibility contract: every estimator takes a campaign seed and
// derives one sub-seed per n (keyed on the value of n) and one seed per
// replicate from it.  Replicate k writes only slot k of preallocated
// result arrays and all reductions run sequentially afterwards, so the
// output is bit-identical for any thread count.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fppcut/capacity.hpp"
#include "fppcut/cutgeom.hpp"
#include "fppcut/flow.hpp"
#include "fppcut/lattice.hpp"

namespace fppcut {

// Lebesgue volume of the unit ball in R^k (k = 0 gives 1)
double alpha_ball_volume(int k);

// Exact (Clopper-Pearson) two-sided confidence interval for a binomial
// proportion; k = 0 pins lo to 0 and k = reps pins hi to 1.
struct BinomCI {
  double lo = 0, hi = 1;
};
BinomCI clopper_pearson(long long hits, long long reps, double conf = 0.95);

// Run body(0..reps-1) on `threads` workers.  The body must only write
// state owned by its replicate index.  The first exception (lowest
// replicate index) is rethrown after all workers join.
void parallel_for_replicates(long long reps, int threads,
                             const std::function<void(long long)>& body);

// ------------------------------------------------- convergence series

struct ConvergenceRow {
  int n = 0;
  long long reps = 0;
  double mean = 0;
  double stddev = 0; // sample standard deviation, 0 when reps == 1
  double ci_lo = 0, ci_hi = 0; // normal-approximation 95% CI on the mean
};

struct ConvergenceSeries {
  std::vector<ConvergenceRow> rows; // one per requested n, input order
};

// ------------------------------------------------------ flow constant

struct FlowConstantResult {
  ConvergenceSeries series; // of tau_n / (H^{d-1}(A) n^{d-1})
  double nu_hat = 0;        // mean at the largest n
  double nu_lo = 0, nu_hi = 0;
};

// Monte Carlo estimate of the cylinder flow constant: for each n, `reps`
// independent capacity fields on cyl(A, h) and the max flow between the
// boundary halves, normalized by H^{d-1}(A) n^{d-1}.  Throws ConfigError
// (tagged with the offending n) when a boundary half is empty.
FlowConstantResult estimate_flow_constant(const CylinderSpec& cyl,
                                          const CapacityLaw& law,
                                          const std::vector<int>& n_list,
                                          long long reps, uint64_t seed,
                                          int threads = 1,
                                          const Limits& lim = {});

// --------------------------------------------------- lower-tail rates

struct RateEstimate {
  double lambda = 0;
  int n = 0;
  long long reps = 0;
  long long hits = 0; // replicates with tau_n <= lambda H^{d-1}(A) n^{d-1}
  bool structurally_impossible = false; // proven p = 0, no sampling needed
  double area_scale = 0;                // H^{d-1}(A) * n^{d-1}
  double p_hat = 0, p_lo = 0, p_hi = 0; // binomial point / 95% CP bounds
  // rate values -log(p) / area_scale; +infinity marks p estimated or
  // proven zero (hits == 0 maps j_hat and j_hi to +infinity)
  double j_hat = 0, j_lo = 0, j_hi = 0;
};

struct RateCurveResult {
  int d = 0, n = 0;
  Vec direction;             // cylinder normal
  double base_area = 0;      // H^{d-1}(A)
  long long min_card = 0;    // minimum cardinality of a T'-B' cutset
  long long delta_int = 0;   // smallest capacity atom * D
  long long D = 1;
  std::vector<RateEstimate> points;  // one per grid value, same order
  std::vector<long long> tau_int;    // per-replicate flow values (empty
                                     // when every grid value is proven
                                     // structurally impossible)
};

// Shared-sample estimate of the lower-tail rate curve at one n.  All
// lambdas are evaluated against one set of replicates, so the hit count
// is nondecreasing along an ascending grid by construction.  Grid values
// with lambda H^{d-1}(A) n^{d-1} below delta_G times the minimum cutset
// cardinality are reported structurally impossible without sampling.
// Every sampled replicate is checked against that structural floor.
// The grid must be finite, nonnegative, strictly ascending.
RateCurveResult estimate_lower_tail_rate(const CylinderSpec& cyl,
                                         const CapacityLaw& law, int n,
                                         const std::vector<double>& lambda_grid,
                                         long long reps, uint64_t seed,
                                         int threads = 1,
                                         const Limits& lim = {});

// -------------------------------------------------------- domain flow

struct DomainFlowReplicate {
  long long phi_int = 0;  // max flow Gamma^1 -> Gamma^2, * D
  long long cut_card = 0; // edges in the canonical minimum cut
  double card_ratio = 0;       // cut_card / n^{d-1}
  std::vector<double> panel_dist; // L^d(R(E) symdiff F) per panel member
};

struct DomainFlowPerN {
  int n = 0;
  std::vector<DomainFlowReplicate> reps;
  double card_ratio_q50 = 0, card_ratio_q90 = 0, card_ratio_max = 0;
};

struct DomainFlowResult {
  ConvergenceSeries series; // of phi_n / n^{d-1}
  std::vector<DomainFlowPerN> per_n;
  double phi_hat = 0; // mean normalized flow at the largest n
};

// Domain flow between the two boundary pieces with per-replicate cut
// summaries: the normalized cut-cardinality statistic and the symmetric-difference
// distance from the filled reachable set R to each polyhedral panel
// member (boxes compare exactly, polygons by vertex-count quadrature).
// Every replicate asserts the mass identity: the empirical measure of
// the cut carries total mass phi_n / n^{d-1} exactly.
DomainFlowResult estimate_domain_flow(const DomainSpec& spec,
                                      const CapacityLaw& law,
                                      const std::vector<int>& n_list,
                                      long long reps, uint64_t seed,
                                      const std::vector<Solid>& panel = {},
                                      int threads = 1, const Limits& lim = {});

// -------------------------------------------------------- ball events

// Does some cutset inside B(x,r) cap Omega_n separate the upper ball
// boundary together with (Gamma_n^1 u Gamma_n^2) \ lower from the lower
// ball boundary, using only edges inside the slab of half-height
// 2 delta r around the equator, at cost <= zeta alpha_{d-1} r^{d-1} n^{d-1}?
// Decided exactly by one max flow with off-slab edges priced uncuttable.
struct GbarResult {
  bool event = false;
  std::string diagnostic;        // set when a degenerate case forced the answer
  long long cut_value_int = -1;  // best slab-contained cut, -1 when none exists
  double threshold = 0;          // zeta alpha_{d-1} r^{d-1} n^{d-1}, real units
  std::vector<int32_t> cut_edges; // witness as domain edge indices
};

GbarResult detect_Gbar_event(const LatticeDomain& dom, const CapacityField& field,
                             const Vec& center, double radius, const Vec& v,
                             double delta, double zeta);

// Existence of U inside B(x,r) cap Z^d/n with
//   card(U symdiff lower-half-ball) <= 4 delta alpha_d r^d n^d   and
//   V(edge boundary of U within B)  <= zeta alpha_{d-1} r^{d-1} n^{d-1}.
// The search space is exponential, so the decision is three-valued:
//   True    a witness verified both conditions (battery: minimum-cut
//           source side, the exact lower half-ball, empty set, full set)
//   False   only in the provable regime: the capacity bound is below
//           delta_G times the minimum lower->upper cut cardinality AND
//           the cardinality bound excludes the non-separating escapes
//           (empty set, full ball)
//   Unknown otherwise
enum class Detection : uint8_t { True, False, Unknown };

struct GResult {
  Detection state = Detection::Unknown;
  std::string note;
  std::vector<int32_t> witness;  // ball-graph vertex indices of U when True
  double card_bound = 0;         // 4 delta alpha_d r^d n^d
  double value_bound = 0;        // zeta alpha_{d-1} r^{d-1} n^{d-1}
  long long min_card = -1;       // lower->upper min cutset cardinality
};

GResult detect_G_event(const BallRegion& ball, const CapacityField& field,
                       double delta, double zeta);

// ----------------------------------------------------- triangle check

struct TriangleSides {
  double bc = 0, ac = 0, ab = 0; // H^1 lengths of the sides opposite A, B, C
};

struct TriangleReport {
  long long checked = 0;
  long long violations = 0;
  long long skipped = 0; // pairs with infinite bounds or out-of-grid argument
  std::vector<std::array<double, 3>> violating; // (lambda, mu, combined arg)
};

// Finite-sample weak triangle inequality on three estimated rate curves:
// for grid pairs (lambda, mu),
//   bc * J_A((lambda ac + mu ab) / bc) <= ac * J_B(lambda) + mu-side * J_C(mu)
// flagged as violated only when the CI-pessimistic comparison fails
// (lower bound on the left against upper bounds on the right).  J_A is
// piecewise-linear interpolated on its grid; pairs whose argument falls
// off the grid or whose bounds are infinite are counted skipped.
// Pre: sides positive, finite, strict triangle inequality; the three
// curve directions must not all coincide.
TriangleReport check_weak_triangle(const RateCurveResult& at_vA,
                                   const RateCurveResult& at_vB,
                                   const RateCurveResult& at_vC,
                                   const TriangleSides& sides);

// -------------------------------------------------- minimality checks

struct MinimalityEntry {
  double rhs = 0;                   // competitor bound for capa(E, f)
  bool certifies_nonminimal = false;
};

struct MinimalityReport {
  double lhs = 0; // capa(E, f)
  std::vector<MinimalityEntry> entries;
  bool nonminimal = false; // some competitor certified capa(E, f) > bound
};

// Evaluate the minimality inequality of (E, f) against each competitor
// in the panel; an empty panel is vacuous.  Certification requires the
// strict inequality capa(E, f) > rhs + tol.
MinimalityReport check_minimality_panel(const ContinuousCutset& E,
                                        const std::vector<double>& f,
                                        const std::vector<ContinuousCutset>& panel,
                                        const DirectionWeight& nu,
                                        double tol = 1e-12);

} // namespace fppcut
