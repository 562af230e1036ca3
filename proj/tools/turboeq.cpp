// Command-line driver: Eb/N0 sweeps, the verification suite, and scenario
// inspection. Exit codes: 0 success, 1 verification failure, 2 config error.

#include <cstdio>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "tq/sweep.hpp"
#include "verify/suite.hpp"

namespace {

int run_sweep_command(const std::string& config_path, std::uint64_t* seed,
                      int* threads, std::string* out) {
  tq::SweepConfig cfg = tq::cli::load_sweep_config(config_path);
  if (seed) cfg.seed = *seed;
  if (threads) cfg.threads = *threads;
  if (out) cfg.out = *out;
  cfg.validate();

  const auto progress = [](const tq::EqualizerConfig& eq, double ebno,
                           long long blocks, long long errors) {
    std::fprintf(stderr, "\r%-5s budget=%-3d %5.2f dB: %lld blocks, %lld errors   ",
                 tq::algorithm_name(eq.algorithm), eq.budget(), ebno, blocks,
                 errors);
  };
  const std::vector<tq::BerRecord> records = tq::run_sweep(cfg, progress);
  std::fprintf(stderr, "\n");

  if (cfg.out.empty()) {
    tq::write_ber_csv(std::cout, records);
  } else {
    std::printf("wrote %zu records to %s\n", records.size(), cfg.out.c_str());
    for (const tq::BerRecord& r : records)
      if (r.iteration == cfg.scenario.iterations)
        std::printf("%-9s %-5s budget=%-3d %5.2f dB  ber=%.3e  (%lld/%lld)\n",
                    r.scenario.c_str(), r.algorithm.c_str(), r.budget,
                    r.ebno_db, r.ber(), r.bit_errors, r.bits);
  }
  return 0;
}

int run_verify_command() {
  const tq::verify::CheckList results = tq::verify::run_verification_suite();
  for (const tq::verify::CheckResult& r : results)
    std::printf("%-4s %s%s%s\n", r.pass ? "ok" : "FAIL", r.name.c_str(),
                r.detail.empty() ? "" : ": ", r.detail.c_str());
  const bool ok = tq::verify::all_passed(results);
  std::printf("%s\n", ok ? "verification passed" : "verification FAILED");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SISO trellis equalization and turbo-equalization harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;

  CLI::App* sweep = app.add_subcommand("sweep", "run an Eb/N0 sweep from a JSON config");
  sweep->add_option("config", config_path, "sweep config file")->required();
  CLI::Option* seed_opt = sweep->add_option("--seed", seed, "override the master seed");
  CLI::Option* threads_opt = sweep->add_option("--threads", threads, "worker threads");
  CLI::Option* out_opt = sweep->add_option("--out", out, "output CSV path");

  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");

  CLI::App* scenario = app.add_subcommand("scenario", "scenario utilities");
  CLI::App* scenario_list = scenario->add_subcommand("list", "list built-in scenarios");
  scenario->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) {
      return run_sweep_command(config_path, *seed_opt ? &seed : nullptr,
                               *threads_opt ? &threads : nullptr,
                               *out_opt ? &out : nullptr);
    }
    if (verify->parsed()) return run_verify_command();
    if (scenario->parsed() && scenario_list->parsed()) {
      for (const std::string& name : tq::builtin_scenario_names())
        std::printf("%s\n", tq::cli::describe(tq::builtin_scenario(name)).c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
