// fpp-cutlab: first-passage max-flow / min-cutset laboratory.
//
// Subcommands:
//   run          execute an experiment from a JSON config
//   verify       dry-run a config: law report, lattice sizes, warnings
//   oracle-check max-flow vs exhaustive min-cut equivalence battery
//   invariants   full structural property suite
//
// Exit codes: 0 ok, 2 configuration error, 3 invariant violation,
// 4 resource exhaustion.

#include <iostream>
#include <new>

#include "CLI11.hpp"
#include "fppcut/errors.hpp"
#include "fppcut/experiment.hpp"

namespace {

struct CommonOpts {
  std::string config;
  std::string out;
  uint64_t seed = 0;
  int threads = 0;
  bool json = false;
  bool has_seed = false, has_threads = false, has_out = false;
};

fppcut::ExperimentConfig load_config(const CommonOpts& o) {
  return fppcut::ExperimentConfig::load(
      o.config, o.has_seed ? &o.seed : nullptr, o.has_threads ? &o.threads : nullptr,
      o.has_out ? &o.out : nullptr, o.json);
}

void add_common(CLI::App* sub, CommonOpts& o, bool need_config) {
  CLI::Option* cfg = sub->add_option("--config", o.config, "JSON config path");
  if (need_config) cfg->required();
  sub->add_option("--seed", o.seed, "override the config seed")
      ->each([&o](const std::string&) { o.has_seed = true; });
  sub->add_option("--threads", o.threads, "worker thread count")
      ->each([&o](const std::string&) { o.has_threads = true; });
  sub->add_option("--out", o.out, "output directory")
      ->each([&o](const std::string&) { o.has_out = true; });
  sub->add_flag("--json", o.json, "mirror CSV rows as JSON lines");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"first-passage max-flow / min-cutset laboratory"};
  app.require_subcommand(1);

  CommonOpts opts;
  uint64_t oc_seed = 1;
  long long oc_reps = 200;

  CLI::App* run = app.add_subcommand("run", "execute an experiment");
  add_common(run, opts, true);
  CLI::App* verify = app.add_subcommand("verify", "dry-run a config");
  add_common(verify, opts, true);
  CLI::App* oracle =
      app.add_subcommand("oracle-check", "flow vs brute-force equivalence battery");
  oracle->add_option("--seed", oc_seed, "battery seed");
  oracle->add_option("--reps", oc_reps, "instance count");
  CLI::App* inv = app.add_subcommand("invariants", "structural property suite");
  (void)inv;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int c = app.exit(e);
    return c == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      fppcut::run_experiment(load_config(opts));
      return 0;
    }
    if (verify->parsed()) {
      fppcut::verify_experiment(load_config(opts), std::cout);
      return 0;
    }
    if (oracle->parsed()) return fppcut::oracle_check(oc_seed, oc_reps, std::cout) == 0 ? 0 : 3;
    return fppcut::invariant_suite(std::cout) == 0 ? 0 : 3;
  } catch (const fppcut::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const fppcut::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const fppcut::CapacityError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 4;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource limit: allocation failed\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
