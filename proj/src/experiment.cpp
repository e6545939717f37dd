#include "fppcut/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "fppcut/cutgeom.hpp"
#include "fppcut/errors.hpp"
#include "fppcut/flow.hpp"

namespace fppcut {

namespace {

using nlohmann::json;

const char* kKinds[] = {"domain-flow",  "cylinder-tau",   "flow-constant",
                        "rate-curve",   "cut-geometry",   "ball-events",
                        "triangle-check", "minimality-panel"};

std::string fmt17(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

Vec parse_vec_json(const json& a, const char* what) {
  if (!a.is_array() || a.size() < 2 || a.size() > 6)
    throw ConfigError(std::string(what) + ": expected an array of 2..6 numbers");
  Vec v = Vec::zeros((int)a.size());
  for (size_t i = 0; i < a.size(); ++i) v[(int)i] = a[i].get<double>();
  return v;
}

CylinderSpec parse_cylinder(const json& j) {
  CylinderSpec c;
  c.center = parse_vec_json(j.at("center"), "cylinder center");
  c.v = parse_vec_json(j.at("v"), "cylinder v");
  for (const auto& s : j.at("side_lengths")) c.side.push_back(s.get<double>());
  c.height = j.at("height").get<double>();
  if (j.contains("frame"))
    for (const auto& f : j.at("frame"))
      c.frame.push_back(parse_vec_json(f, "cylinder frame axis"));
  return c;
}

Solid parse_panel_solid(const json& j) {
  Solid s;
  if (j.contains("box")) {
    std::vector<std::array<double, 2>> iv;
    for (const auto& p : j.at("box")) iv.push_back({p[0].get<double>(), p[1].get<double>()});
    s.kind = Solid::Box;
    s.box = box_from_intervals(iv);
  } else if (j.contains("halfspaces")) {
    s.kind = Solid::Polygon;
    std::vector<std::array<Rat, 3>> hs;
    for (const auto& h : j.at("halfspaces")) {
      Vec a = parse_vec_json(h.at("a"), "halfspace a");
      if (a.d != 2) throw ConfigError("panel halfspaces are supported in d=2 only");
      hs.push_back({rat_from_double(a[0]), rat_from_double(a[1]),
                    rat_from_double(h.at("b").get<double>())});
    }
    s.poly = poly2_from_halfspaces(hs);
  } else {
    throw ConfigError("panel members must be polyhedral (box or halfspaces)");
  }
  return s;
}

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
  double s = 0;
  for (double x : xs) s += x;
  mean = s / (double)xs.size();
  sd = 0;
  if (xs.size() >= 2) {
    double q = 0;
    for (double x : xs) q += (x - mean) * (x - mean);
    sd = std::sqrt(q / (double)(xs.size() - 1));
  }
}

double ipow(double b, int e) {
  double r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// ------------------------------------------------------------- writer

struct Writer {
  std::ofstream csv, jsonl;
  bool mirror = false;
  std::string hash, exp;

  void open(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    hash = cfg.hash;
    exp = cfg.experiment;
    mirror = cfg.json_mirror;
    csv.open(fs::path(cfg.out_dir) / "results.csv", std::ios::binary);
    if (!csv) throw ConfigError("cannot open results.csv under " + cfg.out_dir);
    csv << "manifest,experiment,n,replicate,lambda,key,value\n";
    if (mirror) {
      jsonl.open(fs::path(cfg.out_dir) / "results.jsonl", std::ios::binary);
      if (!jsonl) throw ConfigError("cannot open results.jsonl under " + cfg.out_dir);
    }
  }

  void emit(long long n, long long rep, const double* lambda, const std::string& key,
            double value) {
    char head[96];
    std::snprintf(head, sizeof head, "%s,%s,%lld,%lld,", hash.c_str(), exp.c_str(), n, rep);
    csv << head << (lambda ? fmt17(*lambda) : "") << ',' << key << ',' << fmt17(value)
        << '\n';
    if (mirror) {
      json r{{"manifest", hash}, {"experiment", exp},     {"n", n},
             {"replicate", rep}, {"key", key},            {"value", value}};
      r["lambda"] = lambda ? json(*lambda) : json(nullptr);
      jsonl << r.dump() << '\n';
    }
  }
  void row(long long n, long long rep, const std::string& key, double value) {
    emit(n, rep, nullptr, key, value);
  }
  void rowl(long long n, double lambda, const std::string& key, double value) {
    emit(n, -1, &lambda, key, value);
  }
};

void write_manifest(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  json m{{"hash", cfg.hash}, {"experiment", cfg.experiment}, {"config", cfg.canonical}};
  std::ofstream os(fs::path(cfg.out_dir) / "manifest.json", std::ios::binary);
  if (!os) throw ConfigError("cannot open manifest.json under " + cfg.out_dir);
  os << m.dump(2) << '\n';
}

// recompute the cut value against the (possibly corrupted) field; the
// injection hook flips a capacity after the solve precisely so that
// this cross-check aborts the run
long long checked_cut_value(const FlowResult& res, const CapacityField& field) {
  long long v = 0;
  for (int32_t e : res.mincut.edges) v += field.cap[e];
  invariant(v == res.value_int, "cut value recomputation disagrees with the solver: " +
                                    std::to_string(v) + " vs " +
                                    std::to_string(res.value_int));
  return v;
}

void corrupt(CapacityField& field, const ExperimentConfig& cfg, const FlowResult& res) {
  if (!cfg.hook_corrupt_capacity) return;
  int32_t e = res.mincut.edges.empty() ? 0 : res.mincut.edges.front();
  if (!field.cap.empty()) field.cap[(size_t)e] += std::max(1LL, cfg.law.D);
}

// ------------------------------------------------------- experiments

void run_flow_constant(const ExperimentConfig& cfg, Writer& w) {
  FlowConstantResult res = estimate_flow_constant(cfg.cylinder, cfg.law, cfg.n_list,
                                                  cfg.reps, cfg.seed, cfg.threads,
                                                  cfg.limits);
  for (const ConvergenceRow& r : res.series.rows) {
    w.row(r.n, -1, "reps", (double)r.reps);
    w.row(r.n, -1, "tau_norm_mean", r.mean);
    w.row(r.n, -1, "tau_norm_std", r.stddev);
    w.row(r.n, -1, "tau_norm_ci_lo", r.ci_lo);
    w.row(r.n, -1, "tau_norm_ci_hi", r.ci_hi);
  }
  w.row(-1, -1, "nu_hat", res.nu_hat);
  w.row(-1, -1, "nu_lo", res.nu_lo);
  w.row(-1, -1, "nu_hi", res.nu_hi);
}

void run_cylinder_tau(const ExperimentConfig& cfg, Writer& w) {
  for (int n : cfg.n_list) {
    CylinderLattice cg = build_cylinder(cfg.cylinder, n, cfg.limits);
    if (cg.tprime.empty() || cg.bprime.empty())
      throw ConfigError("cylinder boundary half empty at n=" + std::to_string(n));
    double scale = cg.base_measure * ipow((double)n, cg.g.d - 1);
    uint64_t sub = derive_replicate_seed(cfg.seed, (uint64_t)n);
    std::vector<long long> tau((size_t)cfg.reps);
    parallel_for_replicates(cfg.reps, cfg.threads, [&](long long k) {
      CapacityField f = sample_field(cg.g, cfg.law, derive_replicate_seed(sub, (uint64_t)k));
      FlowResult r = max_flow(cg.g, f.cap, cg.tprime, cg.bprime);
      corrupt(f, cfg, r);
      checked_cut_value(r, f);
      tau[(size_t)k] = r.value_int;
    });
    std::vector<double> norm((size_t)cfg.reps);
    for (size_t k = 0; k < tau.size(); ++k) {
      norm[k] = (double)tau[k] / ((double)cfg.law.D * scale);
      w.row(n, (long long)k, "tau_int", (double)tau[k]);
      w.row(n, (long long)k, "tau_norm", norm[k]);
    }
    double m, sd;
    mean_std(norm, m, sd);
    w.row(n, -1, "tau_norm_mean", m);
    w.row(n, -1, "tau_norm_std", sd);
  }
}

void run_rate_curve(const ExperimentConfig& cfg, Writer& w) {
  for (int n : cfg.n_list) {
    RateCurveResult res = estimate_lower_tail_rate(cfg.cylinder, cfg.law, n,
                                                   cfg.lambda_grid, cfg.reps, cfg.seed,
                                                   cfg.threads, cfg.limits);
    w.row(n, -1, "min_card", (double)res.min_card);
    w.row(n, -1, "area_scale", res.base_area * ipow((double)n, res.d - 1));
    w.row(n, -1, "delta", (double)res.delta_int / (double)res.D);
    for (const RateEstimate& p : res.points) {
      w.rowl(n, p.lambda, "hits", (double)p.hits);
      w.rowl(n, p.lambda, "structural", p.structurally_impossible ? 1.0 : 0.0);
      w.rowl(n, p.lambda, "p_hat", p.p_hat);
      w.rowl(n, p.lambda, "p_lo", p.p_lo);
      w.rowl(n, p.lambda, "p_hi", p.p_hi);
      w.rowl(n, p.lambda, "j_hat", p.j_hat);
      w.rowl(n, p.lambda, "j_lo", p.j_lo);
      w.rowl(n, p.lambda, "j_hi", p.j_hi);
    }
  }
}

void run_domain_flow(const ExperimentConfig& cfg, Writer& w) {
  if (cfg.hook_corrupt_capacity) {
    // abort-contract path: corrupt one capacity after the solve and let
    // the recomputation trip the invariant
    for (int n : cfg.n_list) {
      LatticeDomain dom = build_lattice(cfg.domain, n, cfg.limits);
      uint64_t sub = derive_replicate_seed(cfg.seed, (uint64_t)n);
      for (long long k = 0; k < cfg.reps; ++k) {
        CapacityField f =
            sample_field(dom.g, cfg.law, derive_replicate_seed(sub, (uint64_t)k));
        FlowResult r = max_flow(dom.g, f.cap, dom.gamma1, dom.gamma2);
        corrupt(f, cfg, r);
        checked_cut_value(r, f);
      }
    }
    return;
  }
  DomainFlowResult res = estimate_domain_flow(cfg.domain, cfg.law, cfg.n_list, cfg.reps,
                                              cfg.seed, cfg.panel, cfg.threads,
                                              cfg.limits);
  for (size_t i = 0; i < res.per_n.size(); ++i) {
    const DomainFlowPerN& pn = res.per_n[i];
    const ConvergenceRow& row = res.series.rows[i];
    double nd1 = ipow((double)pn.n, cfg.domain.d - 1);
    for (size_t k = 0; k < pn.reps.size(); ++k) {
      const DomainFlowReplicate& rep = pn.reps[k];
      w.row(pn.n, (long long)k, "phi_norm",
            (double)rep.phi_int / ((double)cfg.law.D * nd1));
      w.row(pn.n, (long long)k, "card_ratio", rep.card_ratio);
      for (size_t p = 0; p < rep.panel_dist.size(); ++p)
        w.row(pn.n, (long long)k, "panel_dist_" + std::to_string(p), rep.panel_dist[p]);
    }
    w.row(pn.n, -1, "phi_norm_mean", row.mean);
    w.row(pn.n, -1, "phi_norm_std", row.stddev);
    w.row(pn.n, -1, "phi_norm_ci_lo", row.ci_lo);
    w.row(pn.n, -1, "phi_norm_ci_hi", row.ci_hi);
    w.row(pn.n, -1, "card_ratio_q50", pn.card_ratio_q50);
    w.row(pn.n, -1, "card_ratio_q90", pn.card_ratio_q90);
    w.row(pn.n, -1, "card_ratio_max", pn.card_ratio_max);
  }
  w.row(-1, -1, "phi_hat", res.phi_hat);
}

void run_cut_geometry(const ExperimentConfig& cfg, Writer& w) {
  namespace fs = std::filesystem;
  for (int n : cfg.n_list) {
    LatticeDomain dom = build_lattice(cfg.domain, n, cfg.limits);
    uint64_t sub = derive_replicate_seed(cfg.seed, (uint64_t)n);
    double nd1 = ipow((double)n, dom.g.d - 1);
    struct Slot {
      long long phi_int = 0, card = 0;
      double mass = 0;
      PerimeterBound pb;
      std::string measure_csv;
      std::string voxels;
    };
    std::vector<Slot> slots((size_t)cfg.reps);
    parallel_for_replicates(cfg.reps, cfg.threads, [&](long long k) {
      CapacityField f =
          sample_field(dom.g, cfg.law, derive_replicate_seed(sub, (uint64_t)k));
      FlowResult r = max_flow(dom.g, f.cap, dom.gamma1, dom.gamma2);
      corrupt(f, cfg, r);
      checked_cut_value(r, f);
      EmpiricalMeasure mu = empirical_measure(dom.g, r.mincut.edges, f);
      invariant(mu.total_int == r.value_int, "cut measure mass mismatch");
      Slot s;
      s.phi_int = r.value_int;
      s.card = (long long)r.mincut.edges.size();
      s.mass = mu.total_mass();
      std::ostringstream ms;
      export_measure_csv(mu, ms);
      s.measure_csv = ms.str();
      VoxelSet R = continuous_representation(dom.g, reachable_set(dom, r.mincut.edges));
      s.voxels = voxelset_rle_json(R).dump();
      s.pb = discrete_perimeter_bound(dom, r.mincut.edges);
      slots[(size_t)k] = std::move(s);
    });
    for (size_t k = 0; k < slots.size(); ++k) {
      const Slot& s = slots[k];
      w.row(n, (long long)k, "phi_norm", (double)s.phi_int / ((double)cfg.law.D * nd1));
      w.row(n, (long long)k, "cut_card", (double)s.card);
      w.row(n, (long long)k, "mass_total", s.mass);
      w.row(n, (long long)k, "perimeter_card_bound", s.pb.card_bound);
      w.row(n, (long long)k, "perimeter_voxel", s.pb.voxel_perimeter);
      std::string stem =
          "cutgeom_n" + std::to_string(n) + "_r" + std::to_string(k);
      std::ofstream mcsv(fs::path(cfg.out_dir) / (stem + "_measure.csv"),
                         std::ios::binary);
      mcsv << s.measure_csv;
      std::ofstream vjs(fs::path(cfg.out_dir) / (stem + "_voxels.json"),
                        std::ios::binary);
      vjs << s.voxels << '\n';
    }
  }
}

void run_ball_events(const ExperimentConfig& cfg, Writer& w) {
  for (int n : cfg.n_list) {
    if (cfg.has_domain) {
      LatticeDomain dom = build_lattice(cfg.domain, n, cfg.limits);
      uint64_t sub = derive_replicate_seed(cfg.seed, 2 * (uint64_t)n);
      struct Slot {
        double event = 0, value = -1, threshold = 0;
      };
      std::vector<Slot> slots((size_t)cfg.reps);
      parallel_for_replicates(cfg.reps, cfg.threads, [&](long long k) {
        CapacityField f =
            sample_field(dom.g, cfg.law, derive_replicate_seed(sub, (uint64_t)k));
        GbarResult r = detect_Gbar_event(dom, f, cfg.ball_center, cfg.ball_radius,
                                         cfg.ball_v, cfg.ball_delta, cfg.ball_zeta);
        slots[(size_t)k] = {r.event ? 1.0 : 0.0,
                            r.cut_value_int < 0
                                ? -1.0
                                : (double)r.cut_value_int / (double)cfg.law.D,
                            r.threshold};
      });
      for (size_t k = 0; k < slots.size(); ++k) {
        w.row(n, (long long)k, "gbar_event", slots[k].event);
        w.row(n, (long long)k, "gbar_cut_value", slots[k].value);
        w.row(n, (long long)k, "gbar_threshold", slots[k].threshold);
      }
    }
    BallSpec bs;
    bs.center = cfg.ball_center;
    bs.radius = cfg.ball_radius;
    bs.v = cfg.ball_v;
    BallRegion ball = build_ball(bs, n, cfg.limits);
    uint64_t sub = derive_replicate_seed(cfg.seed, 2 * (uint64_t)n + 1);
    struct GSlot {
      double state = -1, card_bound = 0, value_bound = 0, min_card = -1;
    };
    std::vector<GSlot> gs((size_t)cfg.reps);
    parallel_for_replicates(cfg.reps, cfg.threads, [&](long long k) {
      CapacityField f =
          sample_field(ball.g, cfg.law, derive_replicate_seed(sub, (uint64_t)k));
      GResult r = detect_G_event(ball, f, cfg.ball_delta, cfg.ball_zeta);
      double st = r.state == Detection::True ? 1.0
                  : r.state == Detection::False ? 0.0
                                                : -1.0;
      gs[(size_t)k] = {st, r.card_bound, r.value_bound, (double)r.min_card};
    });
    for (size_t k = 0; k < gs.size(); ++k) {
      w.row(n, (long long)k, "g_state", gs[k].state);
      w.row(n, (long long)k, "g_card_bound", gs[k].card_bound);
      w.row(n, (long long)k, "g_value_bound", gs[k].value_bound);
      w.row(n, (long long)k, "g_min_card", gs[k].min_card);
    }
  }
}

void run_triangle_check(const ExperimentConfig& cfg, Writer& w) {
  for (int n : cfg.n_list) {
    std::vector<RateCurveResult> curves;
    for (size_t i = 0; i < 3; ++i) {
      curves.push_back(estimate_lower_tail_rate(
          cfg.tri_cylinders[i], cfg.law, n, cfg.lambda_grid, cfg.reps,
          derive_replicate_seed(cfg.seed, 1000 + (uint64_t)i), cfg.threads, cfg.limits));
      const RateCurveResult& c = curves.back();
      std::string pre = "c" + std::to_string(i) + "_";
      w.row(n, -1, pre + "min_card", (double)c.min_card);
      for (const RateEstimate& p : c.points) {
        w.rowl(n, p.lambda, pre + "hits", (double)p.hits);
        w.rowl(n, p.lambda, pre + "structural", p.structurally_impossible ? 1.0 : 0.0);
        w.rowl(n, p.lambda, pre + "j_hat", p.j_hat);
        w.rowl(n, p.lambda, pre + "j_lo", p.j_lo);
        w.rowl(n, p.lambda, pre + "j_hi", p.j_hi);
      }
    }
    TriangleReport rep = check_weak_triangle(curves[0], curves[1], curves[2],
                                             cfg.tri_sides);
    w.row(n, -1, "checked", (double)rep.checked);
    w.row(n, -1, "violations", (double)rep.violations);
    w.row(n, -1, "skipped", (double)rep.skipped);
  }
}

void run_minimality_panel(const ExperimentConfig& cfg, Writer& w) {
  PolyhedralDomain dom = polyhedral_domain_from_spec(cfg.domain);
  PolyhedralSet E = PolyhedralSet::from_json(cfg.min_E);
  ContinuousCutset EC = make_continuous_cutset(dom, E);

  double scale = cfg.min_nu_scale;
  if (scale < 0) {
    if (!cfg.has_law || cfg.law.kind != CapacityLaw::Deterministic)
      throw ConfigError(
          "minimality-panel: give nu_l1_scale or a deterministic law to derive it");
    scale = cfg.law.delta();
  }
  DirectionWeight nu = [scale](const Vec& v) { return scale * norm1(v); };

  std::vector<double> f(EC.surface.size());
  for (size_t i = 0; i < EC.surface.size(); ++i)
    f[i] = cfg.min_f_const >= 0 ? cfg.min_f_const : nu(EC.surface[i].normal);

  std::vector<ContinuousCutset> panel;
  for (const json& pj : cfg.min_panel)
    panel.push_back(make_continuous_cutset(dom, PolyhedralSet::from_json(pj)));

  MinimalityReport rep = check_minimality_panel(EC, f, panel, nu);
  w.row(-1, -1, "capa", rep.lhs);
  w.row(-1, -1, "i0", l1_surface_energy(EC));
  w.row(-1, -1, "surface_area", EC.surface_area());
  for (size_t i = 0; i < rep.entries.size(); ++i) {
    w.row(-1, -1, "rhs_" + std::to_string(i), rep.entries[i].rhs);
    w.row(-1, -1, "certifies_" + std::to_string(i),
          rep.entries[i].certifies_nonminimal ? 1.0 : 0.0);
  }
  w.row(-1, -1, "nonminimal", rep.nonminimal ? 1.0 : 0.0);

  if (cfg.has_law) {
    double g1 = 0;
    for (const Facet& fc : dom.gamma1) g1 += fc.measure;
    double M = cfg.law.M > 0 ? cfg.law.M : cfg.law.max_support();
    TMembership tm = check_T_membership(EC, f, nu, M, g1);
    w.row(-1, -1, "t_member", tm.ok ? 1.0 : 0.0);
  }
}

int dimension_of(const ExperimentConfig& cfg) {
  if (cfg.has_domain) return cfg.domain.d;
  if (cfg.has_cylinder) return cfg.cylinder.center.d;
  if (cfg.has_ball) return cfg.ball_center.d;
  if (cfg.has_triangle) return cfg.tri_cylinders[0].center.d;
  return 2;
}

} // namespace

// --------------------------------------------------------- public api

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const uint64_t* seed_override,
                                             const int* threads_override,
                                             const std::string* out_override,
                                             bool json_mirror) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "experiment", "seed",   "reps",        "n_list",     "threads",
      "law",        "domain", "cylinder",    "ball",       "lambda_grid",
      "panel",      "out",    "limits",      "pc_override", "test_hooks",
      "triangle",   "minimality"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("config: unknown key \"" + it.key() + "\"");

  ExperimentConfig cfg;
  cfg.experiment = j.at("experiment").get<std::string>();
  bool ok_kind = false;
  for (const char* k : kKinds) ok_kind = ok_kind || cfg.experiment == k;
  if (!ok_kind) throw ConfigError("unknown experiment kind \"" + cfg.experiment + "\"");

  json c = j;
  if (seed_override) c["seed"] = *seed_override;
  if (!c.contains("seed"))
    throw ConfigError("seed is required; there is no wall-clock default");
  const json& sj = c.at("seed");
  if (sj.is_number_unsigned())
    cfg.seed = sj.get<uint64_t>();
  else if (sj.is_number_integer() && sj.get<long long>() >= 0)
    cfg.seed = (uint64_t)sj.get<long long>();
  else if (sj.is_string())
    try {
      std::string s = sj.get<std::string>();
      size_t used = 0;
      cfg.seed = std::stoull(s, &used);
      if (used != s.size() || s.find('-') != std::string::npos)
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("seed string does not parse as an unsigned integer");
    }
  else
    throw ConfigError("seed must be a nonnegative integer");

  cfg.reps = c.value("reps", 1LL);
  if (cfg.reps < 1) throw ConfigError("reps must be >= 1");
  if (!c.contains("n_list") || !c.at("n_list").is_array() || c.at("n_list").empty())
    throw ConfigError("n_list must be a nonempty array");
  for (const auto& nv : c.at("n_list")) {
    int n = nv.get<int>();
    if (n < 1) throw ConfigError("n_list entries must be >= 1");
    cfg.n_list.push_back(n);
  }
  cfg.threads = threads_override ? *threads_override : c.value("threads", 1);
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  cfg.out_dir = out_override ? *out_override : c.value("out", std::string("."));
  cfg.json_mirror = json_mirror;

  if (c.contains("limits")) {
    cfg.limits.max_edges = c.at("limits").value("max_edges", cfg.limits.max_edges);
    if (cfg.limits.max_edges < 1) throw ConfigError("limits.max_edges must be >= 1");
  }
  if (c.contains("pc_override"))
    for (auto it = c.at("pc_override").begin(); it != c.at("pc_override").end(); ++it)
      cfg.pc_override[std::stoi(it.key())] = it.value().get<double>();
  if (c.contains("test_hooks"))
    cfg.hook_corrupt_capacity = c.at("test_hooks").value("corrupt_capacity", false);

  if (c.contains("law")) {
    cfg.law = CapacityLaw::from_json(c.at("law"));
    cfg.has_law = true;
  }
  if (c.contains("domain")) {
    cfg.domain = DomainSpec::from_json(c.at("domain"));
    cfg.has_domain = true;
  }
  if (c.contains("cylinder")) {
    cfg.cylinder = parse_cylinder(c.at("cylinder"));
    cfg.has_cylinder = true;
  }
  if (c.contains("ball")) {
    const json& b = c.at("ball");
    cfg.ball_center = parse_vec_json(b.at("center"), "ball center");
    cfg.ball_v = parse_vec_json(b.at("v"), "ball v");
    cfg.ball_radius = b.at("radius").get<double>();
    cfg.ball_delta = b.at("delta").get<double>();
    cfg.ball_zeta = b.at("zeta").get<double>();
    cfg.has_ball = true;
  }
  if (c.contains("lambda_grid"))
    for (const auto& l : c.at("lambda_grid")) cfg.lambda_grid.push_back(l.get<double>());
  if (c.contains("panel"))
    for (const auto& p : c.at("panel")) cfg.panel.push_back(parse_panel_solid(p));
  if (c.contains("triangle")) {
    const json& t = c.at("triangle");
    cfg.tri_sides.bc = t.at("sides").at("bc").get<double>();
    cfg.tri_sides.ac = t.at("sides").at("ac").get<double>();
    cfg.tri_sides.ab = t.at("sides").at("ab").get<double>();
    if (!t.contains("cylinders") || t.at("cylinders").size() != 3)
      throw ConfigError("triangle: exactly three cylinders are required");
    for (const auto& cj : t.at("cylinders")) cfg.tri_cylinders.push_back(parse_cylinder(cj));
    cfg.has_triangle = true;
  }
  if (c.contains("minimality")) {
    const json& m = c.at("minimality");
    cfg.min_E = m.at("E");
    if (m.contains("panel"))
      for (const auto& p : m.at("panel")) cfg.min_panel.push_back(p);
    cfg.min_f_const = m.value("f", -1.0);
    cfg.min_nu_scale = m.value("nu_l1_scale", -1.0);
    cfg.has_minimality = true;
  }

  auto need = [&](bool have, const char* what) {
    if (!have)
      throw ConfigError(cfg.experiment + ": missing required section \"" +
                        std::string(what) + "\"");
  };
  const std::string& e = cfg.experiment;
  if (e == "domain-flow" || e == "cut-geometry") {
    need(cfg.has_law, "law");
    need(cfg.has_domain, "domain");
  } else if (e == "cylinder-tau" || e == "flow-constant") {
    need(cfg.has_law, "law");
    need(cfg.has_cylinder, "cylinder");
  } else if (e == "rate-curve") {
    need(cfg.has_law, "law");
    need(cfg.has_cylinder, "cylinder");
    need(!cfg.lambda_grid.empty(), "lambda_grid");
  } else if (e == "ball-events") {
    need(cfg.has_law, "law");
    need(cfg.has_ball, "ball");
  } else if (e == "triangle-check") {
    need(cfg.has_law, "law");
    need(cfg.has_triangle, "triangle");
    need(!cfg.lambda_grid.empty(), "lambda_grid");
  } else if (e == "minimality-panel") {
    need(cfg.has_domain, "domain");
    need(cfg.has_minimality, "minimality");
  }

  if (cfg.has_law) {
    ValidationReport vr = validate_law(cfg.law, dimension_of(cfg), cfg.pc_override);
    if (!vr.ok) throw ConfigError("capacity law failed validation");
  }

  cfg.canonical = c;
  cfg.canonical.erase("threads");
  cfg.canonical.erase("out");
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx",
                (unsigned long long)fnv1a64(cfg.canonical.dump()));
  cfg.hash = hex;
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path,
                                        const uint64_t* seed_override,
                                        const int* threads_override,
                                        const std::string* out_override,
                                        bool json_mirror) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  return from_json(j, seed_override, threads_override, out_override, json_mirror);
}

void run_experiment(const ExperimentConfig& cfg) {
  Writer w;
  w.open(cfg);
  write_manifest(cfg);
  const std::string& e = cfg.experiment;
  if (e == "flow-constant")
    run_flow_constant(cfg, w);
  else if (e == "cylinder-tau")
    run_cylinder_tau(cfg, w);
  else if (e == "rate-curve")
    run_rate_curve(cfg, w);
  else if (e == "domain-flow")
    run_domain_flow(cfg, w);
  else if (e == "cut-geometry")
    run_cut_geometry(cfg, w);
  else if (e == "ball-events")
    run_ball_events(cfg, w);
  else if (e == "triangle-check")
    run_triangle_check(cfg, w);
  else if (e == "minimality-panel")
    run_minimality_panel(cfg, w);
  else
    throw ConfigError("unknown experiment kind \"" + e + "\"");
}

void verify_experiment(const ExperimentConfig& cfg, std::ostream& os) {
  os << "experiment: " << cfg.experiment << "\nmanifest: " << cfg.hash << "\n";
  if (cfg.has_law) {
    ValidationReport vr = validate_law(cfg.law, dimension_of(cfg), cfg.pc_override);
    os << "law: " << cfg.law.id() << (vr.ok ? "" : "  INVALID") << "\n";
    for (const std::string& wmsg : vr.warnings) os << "  warning: " << wmsg << "\n";
  }
  for (int n : cfg.n_list) {
    if (cfg.has_domain) {
      long long ev = 0, ee = 0;
      estimate_lattice_sizes(cfg.domain, n, ev, ee);
      if (ee > cfg.limits.max_edges) {
        os << "n=" << n << ": capacity warning: ~" << ee
           << " edges exceed the budget of " << cfg.limits.max_edges
           << " (~" << ev << " vertices); not building\n";
      } else {
        try {
          LatticeDomain dom = build_lattice(cfg.domain, n, cfg.limits);
          os << "n=" << n << ": " << dom.g.verts.size() << " vertices, "
             << dom.g.edges.size() << " edges, boundary " << dom.gamma1.size() << "+"
             << dom.gamma2.size() << "\n";
        } catch (const ConfigError& ex) {
          os << "n=" << n << ": diagnostic: " << ex.what() << "\n";
        } catch (const CapacityError& ex) {
          os << "n=" << n << ": capacity warning: " << ex.what() << "\n";
        }
      }
    }
    auto cyl_report = [&](const CylinderSpec& cs, const char* tag) {
      try {
        CylinderLattice cg = build_cylinder(cs, n, cfg.limits);
        os << "n=" << n << tag << ": " << cg.g.verts.size() << " vertices, "
           << cg.g.edges.size() << " edges, T'=" << cg.tprime.size()
           << ", B'=" << cg.bprime.size() << "\n";
        if (cg.tprime.empty() || cg.bprime.empty())
          os << "n=" << n << tag << ": diagnostic: empty boundary half\n";
      } catch (const ConfigError& ex) {
        os << "n=" << n << tag << ": diagnostic: " << ex.what() << "\n";
      } catch (const CapacityError& ex) {
        os << "n=" << n << tag << ": capacity warning: " << ex.what() << "\n";
      }
    };
    if (cfg.has_cylinder) cyl_report(cfg.cylinder, " cylinder");
    if (cfg.has_triangle)
      for (size_t i = 0; i < cfg.tri_cylinders.size(); ++i)
        cyl_report(cfg.tri_cylinders[i], (" triangle-" + std::to_string(i)).c_str());
    if (cfg.has_ball) {
      BallSpec bs;
      bs.center = cfg.ball_center;
      bs.radius = cfg.ball_radius;
      bs.v = cfg.ball_v;
      try {
        BallRegion ball = build_ball(bs, n, cfg.limits);
        os << "n=" << n << " ball: " << ball.g.verts.size() << " vertices, "
           << ball.g.edges.size() << " edges, boundary " << ball.upper.size() << "+"
           << ball.lower.size() << "\n";
      } catch (const ConfigError& ex) {
        os << "n=" << n << " ball: diagnostic: " << ex.what() << "\n";
      } catch (const CapacityError& ex) {
        os << "n=" << n << " ball: capacity warning: " << ex.what() << "\n";
      }
    }
  }
}

long long oracle_check(uint64_t seed, long long reps, std::ostream& os) {
  if (reps < 1) throw ConfigError("oracle-check: reps must be >= 1");
  std::vector<CapacityLaw> laws = {CapacityLaw::deterministic(1),
                                   CapacityLaw::two_point(1, 2, 0.5),
                                   CapacityLaw::two_point(0, 1, 0.6)};
  DomainSpec box = DomainSpec::unit_box(2);
  json slab{{"d", 2},
            {"solid", json::array({json{{"box", {{0.0, 1.0}, {0.0, 0.5}}}}})},
            {"gamma1", json::array({json{{"face", "x0-min"}}})},
            {"gamma2", json::array({json{{"face", "x0-max"}}})}};
  DomainSpec slabspec = DomainSpec::from_json(slab);
  CylinderSpec cyl;
  cyl.center = Vec::zeros(2);
  cyl.center[1] = 0.5;
  cyl.v = Vec::axis(2, 0);
  cyl.side = {1.0};
  cyl.height = 0.6;

  long long bad = 0;
  for (long long k = 0; k < reps; ++k) {
    const CapacityLaw& law = laws[(size_t)(k % 3)];
    uint64_t fs = derive_replicate_seed(seed, (uint64_t)k);
    LatticeGraph g;
    std::vector<int32_t> src, snk;
    switch ((k / 3) % 3) {
      case 0: {
        LatticeDomain dom = build_lattice(box, 2);
        g = dom.g;
        src = dom.gamma1;
        snk = dom.gamma2;
        break;
      }
      case 1: {
        LatticeDomain dom = build_lattice(slabspec, 2);
        g = dom.g;
        src = dom.gamma1;
        snk = dom.gamma2;
        break;
      }
      default: {
        CylinderLattice cg = build_cylinder(cyl, 2);
        g = cg.g;
        src = cg.tprime;
        snk = cg.bprime;
        break;
      }
    }
    CapacityField f = sample_field(g, law, fs);
    FlowResult mf = max_flow(g, f.cap, src, snk);
    CutSet bf = brute_force_min_cut(g, f.cap, src, snk);
    bool same = mf.value_int == bf.value_int;
    bool cuts = is_cutset(g, mf.mincut.edges, src, snk) &&
                is_cutset(g, bf.edges, src, snk);
    if (!same || !cuts) {
      ++bad;
      os << "disagreement at instance " << k << ": flow " << mf.value_int
         << " vs brute force " << bf.value_int << (cuts ? "" : " (non-cutset)") << "\n";
    }
  }
  os << "oracle-check: " << reps << " instances, " << bad << " disagreements\n";
  return bad;
}

long long invariant_suite(std::ostream& os) {
  long long fails = 0;
  auto check = [&](const char* name, const std::function<bool()>& body) {
    bool ok = false;
    std::string err;
    try {
      ok = body();
    } catch (const std::exception& e) {
      err = e.what();
    }
    os << (ok ? "[ok]   " : "[FAIL] ") << name;
    if (!ok && !err.empty()) os << "  (" << err << ")";
    os << "\n";
    if (!ok) ++fails;
  };

  check("unit box closed forms", [&] {
    for (int d : {2, 3})
      for (int n : {2, 3, 4}) {
        LatticeDomain dom = build_lattice(DomainSpec::unit_box(d), n);
        long long np1 = n + 1, verts = 1, face = 1;
        for (int i = 0; i < d; ++i) verts *= np1;
        for (int i = 0; i < d - 1; ++i) face *= np1;
        if ((long long)dom.g.verts.size() != verts) return false;
        if ((long long)dom.g.edges.size() != (long long)d * n * face) return false;
        if ((long long)dom.gamma1.size() != face) return false;
        if ((long long)dom.gamma2.size() != face) return false;
      }
    return true;
  });

  check("deterministic cylinder flow", [&] {
    CylinderSpec cyl;
    cyl.center = Vec::zeros(2);
    cyl.center[1] = 0.5;
    cyl.v = Vec::axis(2, 0);
    cyl.side = {1.0};
    cyl.height = 1.0;
    CapacityLaw det1 = CapacityLaw::deterministic(1);
    for (int n : {2, 4, 8}) {
      CylinderLattice cg = build_cylinder(cyl, n);
      CapacityField f = sample_field(cg.g, det1, 7);
      FlowResult r = max_flow(cg.g, f.cap, cg.tprime, cg.bprime);
      if (r.value_int != n + 1) return false;
      if (min_cardinality_cut(cg.g, cg.tprime, cg.bprime) != n + 1) return false;
    }
    return true;
  });

  check("duality and cutset batch", [&] {
    DomainSpec box = DomainSpec::unit_box(2);
    CapacityLaw law = CapacityLaw::two_point(1, 2, 0.5);
    for (int n : {2, 3, 4})
      for (uint64_t s = 0; s < 10; ++s) {
        LatticeDomain dom = build_lattice(box, n);
        CapacityField f = sample_field(dom.g, law, derive_replicate_seed(991, s * 7 + n));
        FlowResult r = max_flow(dom.g, f.cap, dom.gamma1, dom.gamma2);
        if (!is_cutset(dom.g, r.mincut.edges, dom.gamma1, dom.gamma2)) return false;
        if (!is_epsilon_cutset(dom.g, f, r.mincut.edges, dom.gamma1, dom.gamma2, 0.0,
                               r.value_int))
          return false;
      }
    return true;
  });

  check("brute-force oracle sample", [&] {
    std::ostringstream sink;
    return oracle_check(17, 24, sink) == 0;
  });

  check("structural floor", [&] {
    CylinderSpec cyl;
    cyl.center = Vec::zeros(2);
    cyl.center[1] = 0.5;
    cyl.v = Vec::axis(2, 0);
    cyl.side = {1.0};
    cyl.height = 1.0;
    CapacityLaw law = CapacityLaw::two_point(1, 2, 0.5);
    CylinderLattice cg = build_cylinder(cyl, 4);
    long long mc = min_cardinality_cut(cg.g, cg.tprime, cg.bprime);
    for (uint64_t k = 0; k < 200; ++k) {
      CapacityField f = sample_field(cg.g, law, derive_replicate_seed(5, k));
      FlowResult r = max_flow(cg.g, f.cap, cg.tprime, cg.bprime);
      if (r.value_int < law.delta_int * mc) return false;
    }
    return true;
  });

  check("seed determinism and separation", [&] {
    LatticeDomain dom = build_lattice(DomainSpec::unit_box(2), 4);
    CapacityLaw law = CapacityLaw::two_point(1, 2, 0.5);
    CapacityField a = sample_field(dom.g, law, 123), b = sample_field(dom.g, law, 123);
    if (a.cap != b.cap) return false;
    std::set<uint64_t> seen;
    for (uint64_t k = 0; k < 10000; ++k) seen.insert(derive_replicate_seed(42, k));
    return seen.size() == 10000;
  });

  check("cut measure mass identity", [&] {
    DomainSpec box = DomainSpec::unit_box(2);
    CapacityLaw law = CapacityLaw::two_point(1, 2, 0.5);
    for (int n : {2, 4})
      for (uint64_t s = 0; s < 10; ++s) {
        LatticeDomain dom = build_lattice(box, n);
        CapacityField f = sample_field(dom.g, law, derive_replicate_seed(31, s + n));
        FlowResult r = max_flow(dom.g, f.cap, dom.gamma1, dom.gamma2);
        EmpiricalMeasure mu = empirical_measure(dom.g, r.mincut.edges, f);
        if (mu.total_int != r.value_int) return false;
        VoxelSet R = continuous_representation(dom.g, reachable_set(dom, r.mincut.edges));
        for (const IVec& z : R.pts)
          if (!R.contains(z)) return false;
      }
    return true;
  });

  check("flat-cut surface energy", [&] {
    PolyhedralDomain dom = polyhedral_unit_box(2);
    json ej{{"box", {{0.0, 0.5}, {0.0, 1.0}}}};
    ContinuousCutset E = make_continuous_cutset(dom, PolyhedralSet::from_json(ej));
    if (l1_surface_energy(E) != 1.0) return false;
    std::vector<double> f(E.surface.size(), 0.7);
    return std::fabs(capa(E, f) - 0.7) < 1e-15;
  });

  check("binomial interval reference values", [&] {
    BinomCI a = clopper_pearson(0, 100);
    BinomCI b = clopper_pearson(3, 10000);
    BinomCI c = clopper_pearson(5, 10);
    return std::fabs(a.hi - 0.036216692645176407) < 1e-10 && a.lo == 0.0 &&
           std::fabs(b.lo - 6.1871485748387169e-05) < 1e-10 &&
           std::fabs(b.hi - 0.00087647452251400073) < 1e-10 &&
           std::fabs(c.lo - 0.18708602844739855) < 1e-10 &&
           std::fabs(c.hi - 0.81291397155260148) < 1e-10;
  });

  check("rate curve monotone with structural flags", [&] {
    CylinderSpec cyl;
    cyl.center = Vec::zeros(2);
    cyl.center[1] = 0.5;
    cyl.v = Vec::axis(2, 0);
    cyl.side = {1.0};
    cyl.height = 1.0;
    CapacityLaw law = CapacityLaw::two_point(1, 2, 0.5);
    RateCurveResult rc =
        estimate_lower_tail_rate(cyl, law, 4, {1.0, 1.3, 1.5, 2.0, 2.5}, 400, 99, 2);
    if (!rc.points[0].structurally_impossible) return false; // 4.0 < 5
    if (rc.points[1].structurally_impossible) return false;  // 5.2 >= 5
    long long prev = -1;
    for (const RateEstimate& p : rc.points) {
      if (p.hits < prev) return false;
      prev = p.hits;
    }
    return rc.points.back().hits == 400; // lambda 2.5 beyond the maximum
  });

  check("capacity homogeneity under scaling", [&] {
    CylinderSpec cyl;
    cyl.center = Vec::zeros(2);
    cyl.center[1] = 0.5;
    cyl.v = Vec::axis(2, 0);
    cyl.side = {1.0};
    cyl.height = 1.0;
    CylinderLattice cg = build_cylinder(cyl, 4);
    CapacityLaw base = CapacityLaw::two_point(1, 2, 0.5);
    CapacityLaw tripled = base.scaled(3.0);
    for (uint64_t s = 0; s < 20; ++s) {
      CapacityField fa = sample_field(cg.g, base, derive_replicate_seed(77, s));
      CapacityField fb = sample_field(cg.g, tripled, derive_replicate_seed(77, s));
      FlowResult ra = max_flow(cg.g, fa.cap, cg.tprime, cg.bprime);
      FlowResult rb = max_flow(cg.g, fb.cap, cg.tprime, cg.bprime);
      if (rb.value_int != 3 * ra.value_int) return false;
    }
    return true;
  });

  check("slab event detector extremes", [&] {
    json dj{{"d", 2},
            {"solid", json::array({json{{"box", {{-2.0, 2.0}, {-2.0, 2.0}}}}})},
            {"gamma1", json::array({json{{"face", "x0-min"}}})},
            {"gamma2", json::array({json{{"face", "x0-max"}}})}};
    DomainSpec spec = DomainSpec::from_json(dj);
    LatticeDomain dom = build_lattice(spec, 8);
    CapacityField f = sample_field(dom.g, CapacityLaw::deterministic(1), 3);
    Vec c0 = Vec::zeros(2);
    Vec e2 = Vec::axis(2, 1);
    GbarResult hi = detect_Gbar_event(dom, f, c0, 0.8, e2, 0.3, 10.0);
    GbarResult lo = detect_Gbar_event(dom, f, c0, 0.8, e2, 0.3, 0.0);
    return hi.event && !lo.event && hi.cut_value_int > 0;
  });

  os << (fails == 0 ? "invariants: all checks passed\n"
                    : "invariants: " + std::to_string(fails) + " check(s) FAILED\n");
  return fails;
}

} // namespace fppcut
