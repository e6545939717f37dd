// Continuous and mesoscopic objects derived from a cutset: the reachable
// set r, its cube fattening R, the empirical measure mu placing mass
// t(e)/n^{d-1} at cut-edge midpoints, and the surface energies I_Omega,
// I_0, capa over polyhedral competitor sets.
//
// The competitor surface for a set E inside the domain is
//   (dE inside Omega)  u  (Gamma^1 not covered by dE)  u  (dE on Gamma^2),
// built facet by facet with exact rational clipping.  Facets must be
// axis-aligned rectangles (any d) or segments (d = 2); dimension 2 is
// normalized to segment form internally.
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fppcut/capacity.hpp"
#include "fppcut/geometry.hpp"
#include "fppcut/lattice.hpp"

namespace fppcut {

// ------------------------------------------------------ empirical side

// Weights are kept in integer units (value * D) so the mass identity
// total_int == V(cut) * D holds exactly, replicate by replicate.
struct EmpiricalMeasure {
  int d = 0;
  int n = 1;
  long long D = 1;
  struct Atom {
    Vec center;           // cut-edge midpoint
    long long weight_int; // capacity in units of 1/D
  };
  std::vector<Atom> atoms;
  long long total_int = 0;

  double scale_area() const;  // n^{d-1}
  double total_mass() const;  // total_int / (D * n^{d-1})
};

EmpiricalMeasure empirical_measure(const LatticeGraph& g,
                                   const std::vector<int32_t>& cut,
                                   const CapacityField& field);

// mu(g) = sum of weight * g(center); a NaN from g marks an undefined
// test-function location and aborts the pairing.
double measure_pairing(const EmpiricalMeasure& mu,
                       const std::function<double(const Vec&)>& g);

// columns c1..cd,weight with full double precision
void export_measure_csv(const EmpiricalMeasure& mu, std::ostream& os);

// vertices still connected to Gamma^1 once the cut edges are removed
std::vector<int32_t> reachable_set(const LatticeDomain& dom,
                                   const std::vector<int32_t>& cut);

// R = r + [-1/(2n), 1/(2n)]^d; satisfies R intersect Z^d/n == r since
// distinct lattice points are 1/n apart, beyond the cube half-width.
VoxelSet continuous_representation(const LatticeGraph& g,
                                   const std::vector<int32_t>& r);

// run-length encoding along the last coordinate
nlohmann::json voxelset_rle_json(const VoxelSet& vs);
VoxelSet voxelset_from_rle_json(const nlohmann::json& j);

struct PerimeterBound {
  double card_bound = 0;      // card(cut) / n^{d-1}
  double voxel_perimeter = 0; // H^{d-1}(boundary of R inside Omega)
};

// The cardinality bound always dominates the voxel perimeter: every
// boundary face of R crosses a removed or absent edge.  voxel_perimeter
// is exact for box and polygon domains; ball solids are resolved with a
// face-midpoint rule.
PerimeterBound discrete_perimeter_bound(const LatticeDomain& dom,
                                        const std::vector<int32_t>& cut);

// ----------------------------------------------------- continuous side

// Polyhedral image of a domain: the solid cells plus the two boundary
// facet families, outward-oriented.
struct PolyhedralDomain {
  int d = 0;
  PolyhedralSet omega;
  std::vector<Facet> gamma1, gamma2;
};

PolyhedralDomain polyhedral_unit_box(int d);
// requires box/polygon solids and rect/segment patches
PolyhedralDomain polyhedral_domain_from_spec(const DomainSpec& spec);

enum class SurfaceClass : uint8_t {
  InteriorE,      // dE strictly inside Omega, carries n_E
  OnGamma2,       // dE lying on Gamma^2, carries n_E
  Gamma1Residual, // Gamma^1 minus dE, carries n_Omega
};

struct ContinuousCutset {
  int d = 0;
  PolyhedralSet E;
  std::vector<Facet> surface;
  std::vector<SurfaceClass> cls; // parallel to surface
  std::vector<double> f;         // optional density, parallel when set

  bool has_density() const { return !f.empty(); }
  double surface_area() const;
};

// Splits each E facet against the boundary families: parts on Gamma^1
// are absorbed into the residual, parts on Gamma^2 kept with n_E, parts
// on the untracked boundary dropped, interior parts kept.  Facets of E
// must be pairwise non-overlapping and lie in the closed domain.
ContinuousCutset make_continuous_cutset(const PolyhedralDomain& dom,
                                        const PolyhedralSet& E);

using DirectionWeight = std::function<double(const Vec&)>;

// sum over the surface of area * nu(stored normal); the three-term
// decomposition is already resolved in the stored normals
double continuous_capacity(const ContinuousCutset& E, const DirectionWeight& nu);

// nu = l1 norm of the normal; for laws with essential infimum delta_G the
// zero-probability threshold of the domain is delta_G times the best
// value of this energy over competitors
double l1_surface_energy(const ContinuousCutset& E);

double capa(const ContinuousCutset& E, const std::vector<double>& f);
double capa(const ContinuousCutset& E); // stored density

// Right-hand side of the minimality comparison of (E, f) against F:
// overlap of F's surface with E's keeps f, the remainder pays nu of the
// facet's own stored normal (n_F in the interior, n_Omega on Gamma^1).
double minimality_rhs(const ContinuousCutset& E, const std::vector<double>& f,
                      const ContinuousCutset& F, const DirectionWeight& nu);

struct TMembership {
  bool ok = true;
  std::vector<std::string> failures;
};

// Admissibility of a density: nonnegative, f <= nu_hat(normal) + tol
// facet by facet, and capa(E, f) <= 10 d^2 M * H^{d-1}(Gamma^1).  The
// capacity ceiling uses the stated crude constant; it is not tight.
TMembership check_T_membership(const ContinuousCutset& E,
                               const std::vector<double>& f,
                               const DirectionWeight& nu_hat, double M,
                               double gamma1_area, double tol = 1e-9);

} // namespace fppcut
