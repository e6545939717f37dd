// Edge capacity laws and reproducible sampling.
//
// All supported laws are finitely supported with nonnegative atoms;
// capacities are stored as integers over a fixed denominator D so that
// every flow/cut value downstream is exact.  Sampling is counter-based:
// the draw for edge i under seed s is a pure function of (s, i), so a
// field never depends on scheduling, thread count, or sampling order.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fppcut/errors.hpp"
#include "fppcut/lattice.hpp"

namespace fppcut {

// -------------------------------------------------------------- rng

// splitmix64 finalizer (bijective)
inline uint64_t mix64(uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// draw for edge `idx` in the field keyed by `seed`
inline uint64_t edge_draw(uint64_t seed, uint64_t idx) {
  return mix64(seed + 0x9E3779B97F4A7C15ULL * (idx + 1));
}

// seed of replicate k derived from a campaign seed; injective in k
// for fixed seed (odd multiplier, bijective mixes)
inline uint64_t derive_replicate_seed(uint64_t seed, uint64_t k) {
  return mix64(seed ^ mix64(0xD1342543DE82EF95ULL * (k + 1)));
}

// -------------------------------------------------------------- laws

struct CapacityLaw {
  enum Kind { Deterministic, TwoPoint, FiniteSupport, UniformQuantized };
  Kind kind = Deterministic;
  long long D = 1;                                // capacities are k/D
  std::vector<std::pair<long long, double>> atoms; // (value*D, prob), ascending
  double M = 0;                                    // a.s. bound, real units

  long long delta_int = 0; // delta_G * D = smallest support value
  double delta() const { return (double)delta_int / (double)D; }
  double max_support() const { return (double)atoms.back().first / (double)D; }
  double atom_at_zero() const {
    return (!atoms.empty() && atoms.front().first == 0) ? atoms.front().second : 0.0;
  }
  double mean() const;
  std::string id() const; // canonical text form, used in manifests

  long long sample_int(uint64_t u) const; // u uniform on 64 bits

  static CapacityLaw from_json(const nlohmann::json& j);
  static CapacityLaw deterministic(double c, long long D = 1);
  static CapacityLaw two_point(double a, double b, double p, long long D = 1);
  static CapacityLaw finite_support(const std::vector<std::pair<double, double>>& vp,
                                    long long D = 1);
  static CapacityLaw uniform_quantized(double a, double b, int steps);
  // scale every support value by c > 0 (used by homogeneity checks)
  CapacityLaw scaled(double c) const;

 private:
  std::vector<uint64_t> cum_; // cumulative 2^64-scaled thresholds
  void finalize();
};

double pc_default(int d); // critical bond-percolation probability defaults

struct ValidationReport {
  bool ok = true; // hard conditions; soft ones only append warnings
  std::vector<std::string> warnings;
};

// hard: boundedness (max support <= M), probabilities sum to 1;
// soft: P(t=0) < 1 - p_c(d), a warning because p_c is only known
// numerically for d >= 3 and a violation still permits simulation
ValidationReport validate_law(const CapacityLaw& law, int d,
                              const std::map<int, double>& pc_override = {});

// ------------------------------------------------------------- fields

struct CapacityField {
  uint64_t seed = 0;
  std::string law_id;
  long long D = 1;
  std::vector<long long> cap; // per canonical edge index, value * D

  double value(int32_t e) const { return (double)cap[e] / (double)D; }
};

CapacityField sample_field(const LatticeGraph& g, const CapacityLaw& law, uint64_t seed);

} // namespace fppcut
