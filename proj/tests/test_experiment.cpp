#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "fppcut/errors.hpp"
#include "fppcut/experiment.hpp"

using namespace fppcut;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_flow_config() {
  return json{
      {"experiment", "flow-constant"},
      {"seed", 5},
      {"reps", 2},
      {"n_list", {2, 4}},
      {"law", {{"kind", "deterministic"}, {"c", 1.0}}},
      {"cylinder",
       {{"center", {0.0, 0.5}},
        {"v", {1.0, 0.0}},
        {"side_lengths", {1.0}},
        {"height", 1.0}}},
  };
}

json unit_box_domain() {
  return json{
      {"d", 2},
      {"solid", json::array({{{"box", {{0.0, 1.0}, {0.0, 1.0}}}}})},
      {"gamma1", json::array({{{"face", "x0-min"}}})},
      {"gamma2", json::array({{{"face", "x0-max"}}})},
  };
}

std::string fresh_out_dir(const char* tag) {
  fs::path p = fs::temp_directory_path() / (std::string("fppcut_test_") + tag);
  fs::remove_all(p);
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

struct Row {
  std::string manifest, experiment, key;
  long long n = 0, replicate = 0;
  std::string lambda, value;
};

std::vector<Row> read_rows(const fs::path& csv) {
  std::ifstream is(csv);
  REQUIRE(is.good());
  std::string line;
  REQUIRE(std::getline(is, line));
  REQUIRE(line == "manifest,experiment,n,replicate,lambda,key,value");
  std::vector<Row> rows;
  while (std::getline(is, line)) {
    std::vector<std::string> f;
    size_t pos = 0;
    for (int i = 0; i < 6; ++i) {
      size_t c = line.find(',', pos);
      REQUIRE(c != std::string::npos);
      f.push_back(line.substr(pos, c - pos));
      pos = c + 1;
    }
    f.push_back(line.substr(pos));
    rows.push_back({f[0], f[1], f[5], std::stoll(f[2]), std::stoll(f[3]), f[4], f[6]});
  }
  return rows;
}

const Row& find_row(const std::vector<Row>& rows, const std::string& key, long long n,
                    long long replicate) {
  for (const Row& r : rows)
    if (r.key == key && r.n == n && r.replicate == replicate) return r;
  static Row missing;
  FAIL(("row not found: " + key + " n=" + std::to_string(n) + " rep=" +
        std::to_string(replicate)));
  return missing;
}

} // namespace

TEST_CASE("the manifest hash function matches published test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("config parsing rejects malformed input with specific messages") {
  json ok = base_flow_config();
  CHECK_NOTHROW(ExperimentConfig::from_json(ok));

  json no_seed = ok;
  no_seed.erase("seed");
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(no_seed),
                       "seed is required; there is no wall-clock default", ConfigError);

  json neg_seed = ok;
  neg_seed["seed"] = -3;
  CHECK_THROWS_AS(ExperimentConfig::from_json(neg_seed), ConfigError);
  json str_seed = ok;
  str_seed["seed"] = "12345";
  CHECK(ExperimentConfig::from_json(str_seed).seed == 12345);
  json bad_str_seed = ok;
  bad_str_seed["seed"] = "12x";
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad_str_seed), ConfigError);

  json unknown = ok;
  unknown["surprise"] = 1;
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(unknown),
                       "config: unknown key \"surprise\"", ConfigError);

  json bad_kind = ok;
  bad_kind["experiment"] = "warp-drive";
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad_kind), ConfigError);

  json zero_reps = ok;
  zero_reps["reps"] = 0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(zero_reps), ConfigError);
  json no_n = ok;
  no_n["n_list"] = json::array();
  CHECK_THROWS_AS(ExperimentConfig::from_json(no_n), ConfigError);
  json bad_n = ok;
  bad_n["n_list"] = {2, 0};
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad_n), ConfigError);
  json bad_threads = ok;
  bad_threads["threads"] = 0;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad_threads), ConfigError);
  json bad_limits = ok;
  bad_limits["limits"] = {{"max_edges", 0}};
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad_limits), ConfigError);

  json no_cyl = ok;
  no_cyl.erase("cylinder");
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(no_cyl),
                       "flow-constant: missing required section \"cylinder\"",
                       ConfigError);
  json no_law = ok;
  no_law.erase("law");
  CHECK_THROWS_AS(ExperimentConfig::from_json(no_law), ConfigError);

  json rate = ok;
  rate["experiment"] = "rate-curve";
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(rate),
                       "rate-curve: missing required section \"lambda_grid\"",
                       ConfigError);

  json ball = ok;
  ball["experiment"] = "ball-events";
  CHECK_THROWS_AS(ExperimentConfig::from_json(ball), ConfigError);

  json tri = ok;
  tri["experiment"] = "triangle-check";
  tri["lambda_grid"] = {1.0, 1.2};
  tri["triangle"] = {{"sides", {{"bc", 1.0}, {"ac", 1.0}, {"ab", 1.0}}},
                     {"cylinders", json::array({ok["cylinder"], ok["cylinder"]})}};
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(tri),
                       "triangle: exactly three cylinders are required", ConfigError);

  json mini = ok;
  mini["experiment"] = "minimality-panel";
  mini.erase("cylinder");
  CHECK_THROWS_AS(ExperimentConfig::from_json(mini), ConfigError);
}

TEST_CASE("manifest hashes strip execution keys and track seed overrides") {
  json a = base_flow_config();
  ExperimentConfig ca = ExperimentConfig::from_json(a);
  CHECK(ca.hash.size() == 16);
  CHECK(ca.hash.find_first_not_of("0123456789abcdef") == std::string::npos);

  json b = a;
  b["threads"] = 8;
  b["out"] = "/somewhere/else";
  ExperimentConfig cb = ExperimentConfig::from_json(b);
  CHECK(cb.threads == 8);
  CHECK(cb.out_dir == "/somewhere/else");
  CHECK(cb.hash == ca.hash); // execution-only keys do not change identity
  CHECK_FALSE(cb.canonical.contains("threads"));
  CHECK_FALSE(cb.canonical.contains("out"));

  json c = a;
  c["seed"] = 6;
  CHECK(ExperimentConfig::from_json(c).hash != ca.hash);

  uint64_t ovr = 6;
  ExperimentConfig co = ExperimentConfig::from_json(a, &ovr);
  CHECK(co.seed == 6);
  CHECK(co.hash == ExperimentConfig::from_json(c).hash);
  uint64_t same = 5;
  CHECK(ExperimentConfig::from_json(a, &same).hash == ca.hash);

  int thr = 3;
  std::string out = "elsewhere";
  ExperimentConfig ct = ExperimentConfig::from_json(a, nullptr, &thr, &out);
  CHECK(ct.threads == 3);
  CHECK(ct.out_dir == "elsewhere");
  CHECK(ct.hash == ca.hash);

  CHECK(ca.pc_override.empty());
  json pc = a;
  pc["pc_override"] = {{"2", 0.6}};
  ExperimentConfig cpc = ExperimentConfig::from_json(pc);
  CHECK(cpc.pc_override.at(2) == 0.6);
}

TEST_CASE("config loading maps file problems to config errors") {
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/path.json"), ConfigError);
  fs::path bad = fs::temp_directory_path() / "fppcut_bad.json";
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(ExperimentConfig::load(bad.string()), ConfigError);
}

TEST_CASE("a deterministic flow-constant run writes exact golden rows") {
  std::string out = fresh_out_dir("golden");
  json j = base_flow_config();
  j["out"] = out;
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  run_experiment(cfg);

  std::vector<Row> rows = read_rows(fs::path(out) / "results.csv");
  REQUIRE_FALSE(rows.empty());
  for (const Row& r : rows) {
    CHECK(r.manifest == cfg.hash);
    CHECK(r.experiment == "flow-constant");
    CHECK(r.lambda.empty());
  }
  CHECK(find_row(rows, "tau_norm_mean", 2, -1).value == "1.5");
  CHECK(find_row(rows, "tau_norm_std", 2, -1).value == "0");
  CHECK(find_row(rows, "tau_norm_ci_lo", 2, -1).value == "1.5");
  CHECK(find_row(rows, "tau_norm_ci_hi", 2, -1).value == "1.5");
  CHECK(find_row(rows, "tau_norm_mean", 4, -1).value == "1.25");
  CHECK(find_row(rows, "nu_hat", -1, -1).value == "1.25");
  CHECK(find_row(rows, "nu_lo", -1, -1).value == "1.25");
  CHECK(find_row(rows, "nu_hi", -1, -1).value == "1.25");
  CHECK(find_row(rows, "reps", 2, -1).value == "2");

  json manifest = json::parse(slurp(fs::path(out) / "manifest.json"));
  CHECK(manifest.at("hash").get<std::string>() == cfg.hash);
  CHECK(manifest.at("experiment").get<std::string>() == "flow-constant");
  CHECK(manifest.at("config") == cfg.canonical);
  CHECK(manifest.at("config").at("seed").get<uint64_t>() == 5);
}

TEST_CASE("identical configs produce byte-identical output at any thread count") {
  json j = {
      {"experiment", "cylinder-tau"},
      {"seed", 9},
      {"reps", 24},
      {"n_list", {3}},
      {"law", {{"kind", "two_point"}, {"a", 1.0}, {"b", 2.0}, {"p", 0.5}}},
      {"cylinder",
       {{"center", {0.0, 0.5}},
        {"v", {1.0, 0.0}},
        {"side_lengths", {1.0}},
        {"height", 1.0}}},
  };
  json j1 = j;
  j1["threads"] = 1;
  j1["out"] = fresh_out_dir("thr1");
  json j4 = j;
  j4["threads"] = 4;
  j4["out"] = fresh_out_dir("thr4");
  run_experiment(ExperimentConfig::from_json(j1));
  run_experiment(ExperimentConfig::from_json(j4));
  std::string csv1 = slurp(fs::path(j1["out"].get<std::string>()) / "results.csv");
  std::string csv4 = slurp(fs::path(j4["out"].get<std::string>()) / "results.csv");
  CHECK(csv1 == csv4);
  CHECK_FALSE(csv1.empty());
}

TEST_CASE("the capacity corruption hook trips the cut recomputation guard") {
  json j = {
      {"experiment", "domain-flow"},
      {"seed", 11},
      {"reps", 2},
      {"n_list", {3}},
      {"law", {{"kind", "two_point"}, {"a", 1.0}, {"b", 2.0}, {"p", 0.5}}},
      {"domain", unit_box_domain()},
      {"test_hooks", {{"corrupt_capacity", true}}},
      {"out", fresh_out_dir("corrupt")},
  };
  try {
    run_experiment(ExperimentConfig::from_json(j));
    FAIL("expected InvariantError");
  } catch (const InvariantError& e) {
    CHECK(std::string(e.what()).find("cut value recomputation disagrees") !=
          std::string::npos);
  }
}

TEST_CASE("verify reports exact counts, budget refusals and diagnostics") {
  json j = {
      {"experiment", "domain-flow"},
      {"seed", 7},
      {"reps", 1},
      {"n_list", {2}},
      {"law", {{"kind", "deterministic"}, {"c", 1.0}}},
      {"domain", unit_box_domain()},
  };
  std::ostringstream os;
  verify_experiment(ExperimentConfig::from_json(j), os);
  CHECK(os.str().find("n=2: 9 vertices, 12 edges, boundary 3+3") != std::string::npos);

  json big = j;
  big["n_list"] = {64};
  big["domain"] = {
      {"d", 3},
      {"solid",
       json::array({{{"box", {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}}}})},
      {"gamma1", json::array({{{"face", "x0-min"}}})},
      {"gamma2", json::array({{{"face", "x0-max"}}})},
  };
  std::ostringstream osb;
  verify_experiment(ExperimentConfig::from_json(big), osb);
  CHECK(osb.str().find("capacity warning") != std::string::npos);
  CHECK(osb.str().find("not building") != std::string::npos);

  json degen = j;
  degen["domain"]["gamma2"] =
      json::array({{{"rect", {{0.0, 0.0}, {0.0, 1.0}}}, {"orient", -1}}});
  std::ostringstream osd;
  verify_experiment(ExperimentConfig::from_json(degen), osd);
  CHECK(osd.str().find("diagnostic:") != std::string::npos);
  CHECK(osd.str().find("degenerate discretization") != std::string::npos);
}

TEST_CASE("the solver equivalence batch finds no disagreements") {
  std::ostringstream os;
  CHECK(oracle_check(1, 30, os) == 0);
}

TEST_CASE("the triangle fixture runs end to end without violations") {
  ExperimentConfig cfg = ExperimentConfig::load(
      std::string(FPPCUT_TEST_DATA_DIR) + "/triangle_small.json", nullptr, nullptr,
      nullptr);
  json j = cfg.canonical;
  j["out"] = fresh_out_dir("tri");
  j["threads"] = 4;
  ExperimentConfig run = ExperimentConfig::from_json(j);
  run_experiment(run);
  std::vector<Row> rows = read_rows(fs::path(j["out"].get<std::string>()) / "results.csv");
  const Row& checked = find_row(rows, "checked", 4, -1);
  const Row& violations = find_row(rows, "violations", 4, -1);
  CHECK(std::stoll(checked.value) > 0);
  CHECK(std::stoll(violations.value) == 0);
  CHECK(std::stoll(find_row(rows, "c0_min_card", 4, -1).value) == 8);
  CHECK(std::stoll(find_row(rows, "c1_min_card", 4, -1).value) == 5);
}
