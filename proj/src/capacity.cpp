#include "fppcut/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace fppcut {

using nlohmann::json;

static long long to_scaled_int(double v, long long D, const char* what) {
  if (v < 0) throw ConfigError(std::string(what) + ": negative capacity value");
  double s = v * (double)D;
  double r = std::round(s);
  if (std::fabs(s - r) > 1e-9)
    throw ConfigError(std::string(what) + ": value " + std::to_string(v) +
                      " is not an integer multiple of 1/D (D=" + std::to_string(D) +
                      "); set D accordingly");
  return (long long)r;
}

void CapacityLaw::finalize() {
  if (atoms.empty()) throw ConfigError("capacity law: empty support");
  if (D < 1) throw ConfigError("capacity law: D must be >= 1");
  std::sort(atoms.begin(), atoms.end());
  for (size_t i = 0; i + 1 < atoms.size(); ++i)
    if (atoms[i].first == atoms[i + 1].first)
      throw ConfigError("capacity law: duplicate support value");
  double psum = 0;
  for (auto& [v, p] : atoms) {
    if (v < 0) throw ConfigError("capacity law: negative support value");
    if (!(p > 0)) throw ConfigError("capacity law: atom probability must be positive");
    psum += p;
  }
  if (std::fabs(psum - 1.0) > 1e-9)
    throw ConfigError("capacity law: probabilities sum to " + std::to_string(psum));
  delta_int = atoms.front().first;
  if (M <= 0) M = max_support();
  if (M + 1e-12 < max_support())
    throw ConfigError("capacity law: bound M below the maximum support value");
  // cumulative thresholds on the 2^64 scale; last bucket absorbs rounding
  cum_.clear();
  long double acc = 0;
  for (size_t i = 0; i < atoms.size(); ++i) {
    acc += atoms[i].second;
    if (i + 1 == atoms.size()) {
      cum_.push_back(UINT64_MAX);
    } else {
      long double t = acc * 18446744073709551616.0L; // 2^64
      if (t >= 18446744073709551615.0L) cum_.push_back(UINT64_MAX - 1);
      else cum_.push_back((uint64_t)t);
    }
  }
}

long long CapacityLaw::sample_int(uint64_t u) const {
  for (size_t i = 0; i + 1 < cum_.size(); ++i)
    if (u < cum_[i]) return atoms[i].first;
  return atoms.back().first;
}

double CapacityLaw::mean() const {
  double m = 0;
  for (auto& [v, p] : atoms) m += (double)v / (double)D * p;
  return m;
}

std::string CapacityLaw::id() const {
  char buf[64];
  std::string s;
  switch (kind) {
    case Deterministic: s = "deterministic("; break;
    case TwoPoint: s = "two_point("; break;
    case FiniteSupport: s = "finite_support("; break;
    case UniformQuantized: s = "uniform_quantized("; break;
  }
  for (size_t i = 0; i < atoms.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%lld:%.17g", atoms[i].first, atoms[i].second);
    s += buf;
    if (i + 1 < atoms.size()) s += ",";
  }
  std::snprintf(buf, sizeof buf, ";D=%lld,M=%.17g)", D, M);
  return s + buf;
}

CapacityLaw CapacityLaw::deterministic(double c, long long D) {
  CapacityLaw l;
  l.kind = Deterministic;
  l.D = D;
  l.atoms = {{to_scaled_int(c, D, "deterministic"), 1.0}};
  l.finalize();
  return l;
}

CapacityLaw CapacityLaw::two_point(double a, double b, double p, long long D) {
  if (!(p > 0) || !(p < 1)) throw ConfigError("two_point: p must be in (0,1)");
  if (!(a < b)) throw ConfigError("two_point: need a < b");
  CapacityLaw l;
  l.kind = TwoPoint;
  l.D = D;
  l.atoms = {{to_scaled_int(a, D, "two_point"), 1.0 - p},
             {to_scaled_int(b, D, "two_point"), p}};
  l.finalize();
  return l;
}

CapacityLaw CapacityLaw::finite_support(const std::vector<std::pair<double, double>>& vp,
                                        long long D) {
  CapacityLaw l;
  l.kind = FiniteSupport;
  l.D = D;
  for (auto& [v, p] : vp) l.atoms.push_back({to_scaled_int(v, D, "finite_support"), p});
  l.finalize();
  return l;
}

CapacityLaw CapacityLaw::uniform_quantized(double a, double b, int steps) {
  if (!(a < b)) throw ConfigError("uniform_quantized: need a < b");
  if (steps < 1) throw ConfigError("uniform_quantized: steps must be >= 1");
  double Dr = steps / (b - a);
  long long D = (long long)std::round(Dr);
  if (D < 1 || std::fabs(Dr - (double)D) > 1e-9)
    throw ConfigError("uniform_quantized: steps/(b-a) must be a positive integer");
  CapacityLaw l;
  l.kind = UniformQuantized;
  l.D = D;
  long long a_int = to_scaled_int(a, D, "uniform_quantized");
  for (int j = 0; j < steps; ++j) l.atoms.push_back({a_int + j, 1.0 / steps});
  l.finalize();
  return l;
}

CapacityLaw CapacityLaw::scaled(double c) const {
  if (!(c > 0)) throw ConfigError("law scaling: factor must be positive");
  CapacityLaw l;
  l.kind = kind;
  l.D = D;
  for (auto& [v, p] : atoms)
    l.atoms.push_back({to_scaled_int((double)v / (double)D * c, D, "scaled law"), p});
  l.M = M * c;
  l.finalize();
  return l;
}

CapacityLaw CapacityLaw::from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  long long D = j.value("D", 1LL);
  CapacityLaw l;
  if (kind == "deterministic") {
    l = deterministic(j.at("c").get<double>(), D);
  } else if (kind == "two_point") {
    l = two_point(j.at("a").get<double>(), j.at("b").get<double>(),
                  j.at("p").get<double>(), D);
  } else if (kind == "finite_support") {
    std::vector<std::pair<double, double>> vp;
    for (const auto& a : j.at("atoms"))
      vp.push_back({a[0].get<double>(), a[1].get<double>()});
    l = finite_support(vp, D);
  } else if (kind == "uniform_quantized") {
    l = uniform_quantized(j.at("a").get<double>(), j.at("b").get<double>(),
                          j.at("steps").get<int>());
  } else {
    throw ConfigError("capacity law: unknown kind \"" + kind + "\"");
  }
  if (j.contains("M")) {
    double M = j.at("M").get<double>();
    if (M + 1e-12 < l.max_support())
      throw ConfigError("capacity law: bound M below the maximum support value");
    l.M = M;
  }
  return l;
}

double pc_default(int d) {
  switch (d) {
    case 2: return 0.5; // exact
    case 3: return 0.2488;
    case 4: return 0.1601;
    case 5: return 0.1182;
    case 6: return 0.0942;
    default: return 1.0 / (2.0 * d - 1.0); // crude default beyond tabulated d
  }
}

ValidationReport validate_law(const CapacityLaw& law, int d,
                              const std::map<int, double>& pc_override) {
  ValidationReport r;
  double pc = pc_default(d);
  auto it = pc_override.find(d);
  if (it != pc_override.end()) pc = it->second;
  double z = law.atom_at_zero();
  if (z >= 1.0 - pc) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "P(t=0)=%.6g >= 1-p_c(%d)=%.6g: the flow constant may be null; "
                  "lower-tail estimates stay valid but degenerate",
                  z, d, 1.0 - pc);
    r.warnings.push_back(buf);
  }
  if (d >= 3 && z > 0 && !r.warnings.empty())
    r.warnings.push_back("p_c(d) for d>=3 is a configured numerical constant, "
                         "not an exact value");
  return r;
}

CapacityField sample_field(const LatticeGraph& g, const CapacityLaw& law, uint64_t seed) {
  CapacityField f;
  f.seed = seed;
  f.law_id = law.id();
  f.D = law.D;
  f.cap.resize(g.edges.size());
  for (size_t i = 0; i < g.edges.size(); ++i)
    f.cap[i] = law.sample_int(edge_draw(seed, (uint64_t)i));
  return f;
}

} // namespace fppcut
