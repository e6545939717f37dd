// Experiment harness: JSON config -> estimator runs -> CSV rows plus a
// JSON manifest.  One long-format CSV schema serves every experiment:
//   manifest,experiment,n,replicate,lambda,key,value
// with n = -1 on global rows, replicate = -1 on aggregate rows and an
// empty lambda where it does not apply.  All numeric cells are printed
// with %.17g, so equal runs are equal byte for byte.
//
// The manifest hash is FNV-1a 64 over the canonical config dump with
// the execution-only keys (threads, out) stripped; a --seed override is
// applied before hashing because it changes the sampled fields.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fppcut/capacity.hpp"
#include "fppcut/estimators.hpp"
#include "fppcut/geometry.hpp"
#include "fppcut/lattice.hpp"

namespace fppcut {

uint64_t fnv1a64(const std::string& s);

struct ExperimentConfig {
  std::string experiment;
  nlohmann::json canonical; // config with threads/out stripped, seed resolved
  std::string hash;         // 16 hex digits of fnv1a64(canonical dump)

  uint64_t seed = 0;
  long long reps = 1;
  std::vector<int> n_list;
  int threads = 1;
  std::string out_dir = ".";
  bool json_mirror = false;

  CapacityLaw law;
  bool has_law = false;
  DomainSpec domain;
  bool has_domain = false;
  CylinderSpec cylinder;
  bool has_cylinder = false;

  // ball-events geometry
  Vec ball_center;
  Vec ball_v;
  double ball_radius = 0;
  double ball_delta = 0;
  double ball_zeta = 0;
  bool has_ball = false;

  std::vector<double> lambda_grid;
  std::vector<Solid> panel; // polyhedral competitors for domain-flow

  Limits limits;
  std::map<int, double> pc_override;
  bool hook_corrupt_capacity = false;

  // triangle-check: three cylinders and the side lengths
  std::vector<CylinderSpec> tri_cylinders;
  TriangleSides tri_sides;
  bool has_triangle = false;

  // minimality-panel: candidate set, competitors, density, weight scale
  nlohmann::json min_E;
  std::vector<nlohmann::json> min_panel;
  double min_f_const = -1;     // < 0 means "use nu(normal) facet-wise"
  double min_nu_scale = -1;    // < 0 means "derive from a deterministic law"
  bool has_minimality = false;

  // Parse and validate.  seed_override/threads/out, when provided by the
  // command line, take precedence over the file.
  static ExperimentConfig from_json(const nlohmann::json& j,
                                    const uint64_t* seed_override = nullptr,
                                    const int* threads_override = nullptr,
                                    const std::string* out_override = nullptr,
                                    bool json_mirror = false);
  static ExperimentConfig load(const std::string& path,
                               const uint64_t* seed_override = nullptr,
                               const int* threads_override = nullptr,
                               const std::string* out_override = nullptr,
                               bool json_mirror = false);
};

// Runs the configured experiment, writing results.csv, manifest.json and
// any per-instance artifacts under out_dir.  Throws on failure; callers
// map exception types to exit codes.
void run_experiment(const ExperimentConfig& cfg);

// Dry run: law report, per-n size estimates against the edge budget and
// exact discretization counts where affordable.  Never throws for
// geometry findings; they are printed as diagnostics.
void verify_experiment(const ExperimentConfig& cfg, std::ostream& os);

// Brute-force equivalence suite on small random instances; returns the
// number of disagreements (0 is a pass).
long long oracle_check(uint64_t seed, long long reps, std::ostream& os);

// Self-contained property battery; returns the number of failed checks.
long long invariant_suite(std::ostream& os);

} // namespace fppcut
