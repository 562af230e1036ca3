#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tq/sweep.hpp"

using namespace tq;

namespace {

ScenarioSpec sweep_scenario() {
  ScenarioSpec s;
  s.name = "sweepy";
  s.interleaver.kind = InterleaverSpec::Kind::random;
  s.interleaver.seed = 21;
  s.taps = {Complex{std::sqrt(0.7)}, Complex{std::sqrt(0.3)}};
  s.modulation = Modulation::bpsk;
  s.info_bits = 59;
  s.iterations = 3;
  s.ebno_grid_db = {2.0};
  return s;
}

}  // namespace

TEST_CASE("config validation enforces the confidence floor") {
  SweepConfig cfg;
  cfg.scenario = sweep_scenario();
  cfg.equalizers = {{Algorithm::exact, 0, 0}};
  cfg.min_errors = 50;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.allow_low_confidence = true;
  CHECK_NOTHROW(cfg.validate());
  cfg.min_errors = 100;
  cfg.allow_low_confidence = false;
  CHECK_NOTHROW(cfg.validate());
  cfg.threads = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("a noiseless single-block sweep reports zero errors") {
  SweepConfig cfg;
  cfg.scenario = sweep_scenario();
  cfg.scenario.ebno_grid_db = {300.0};  // sigma^2 ~ 0
  cfg.equalizers = {{Algorithm::exact, 0, 0}};
  cfg.min_errors = 0;
  cfg.max_blocks = 1;
  cfg.allow_low_confidence = true;
  const std::vector<BerRecord> records = run_sweep(cfg);
  REQUIRE(records.size() == 3);
  for (const BerRecord& r : records) {
    CHECK(r.bit_errors == 0);
    CHECK(r.frames == 1);
    CHECK(r.bits == 59);
  }
}

TEST_CASE("records are reproducible and thread-count independent") {
  SweepConfig cfg;
  cfg.scenario = sweep_scenario();
  cfg.equalizers = {{Algorithm::mstar, 2, 0}, {Algorithm::rs, 0, 1}};
  cfg.ebno_db = {1.0, 3.0};
  cfg.min_errors = 0;
  cfg.max_blocks = 40;
  cfg.allow_low_confidence = true;
  cfg.seed = 99;
  const std::vector<BerRecord> a = run_sweep(cfg);
  cfg.threads = 3;
  const std::vector<BerRecord> b = run_sweep(cfg);
  CHECK(a == b);
  for (const BerRecord& r : a) {
    CHECK(r.bit_errors <= r.bits);
    CHECK(r.frame_errors <= r.frames);
  }
}

TEST_CASE("csv writing is canonical and parses back") {
  SweepConfig cfg;
  cfg.scenario = sweep_scenario();
  cfg.equalizers = {{Algorithm::m, 2, 0}};
  cfg.ebno_db = {1.25};
  cfg.min_errors = 0;
  cfg.max_blocks = 5;
  cfg.allow_low_confidence = true;
  const std::vector<BerRecord> records = run_sweep(cfg);

  std::stringstream s1, s2;
  write_ber_csv(s1, records);
  write_ber_csv(s2, records);
  CHECK(s1.str() == s2.str());
  CHECK(s1.str().rfind("scenario,algorithm,budget,ebno_db,iteration,"
                       "bit_errors,bits,frames,frame_errors,seed\n", 0) == 0);
  CHECK(read_ber_csv(s1) == records);

  std::stringstream bad("not,a,header\n");
  CHECK_THROWS(read_ber_csv(bad));
}

TEST_CASE("ber decreases with Eb/N0 once enough errors are collected") {
  SweepConfig cfg;
  cfg.scenario = sweep_scenario();
  cfg.equalizers = {{Algorithm::mstar, 2, 0}};
  cfg.ebno_db = {-4.0, -1.0};
  cfg.min_errors = 500;
  cfg.max_blocks = 4000;
  const std::vector<BerRecord> records = run_sweep(cfg);
  double ber_lo = 0.0, ber_hi = 0.0;
  for (const BerRecord& r : records) {
    if (r.iteration != cfg.scenario.iterations) continue;
    CHECK(r.bit_errors >= 500);
    (r.ebno_db < -2.0 ? ber_lo : ber_hi) = r.ber();
  }
  CHECK(ber_lo > ber_hi);
}

TEST_CASE("threshold interpolation is log-linear") {
  std::vector<BerRecord> records;
  for (const auto& [ebno, errors] : {std::pair{2.0, 10000LL},
                                     std::pair{3.0, 1000LL},
                                     std::pair{4.0, 100LL}}) {
    BerRecord r;
    r.scenario = "x";
    r.algorithm = "mstar";
    r.budget = 4;
    r.ebno_db = ebno;
    r.iteration = 6;
    r.bit_errors = errors;
    r.bits = 10000000;
    records.push_back(r);
  }
  // One BER decade per dB: target 10^-3.5 sits halfway between 2 and 3 dB.
  const auto at = ebno_at_target(records, "mstar", 4, 6, std::pow(10.0, -3.5));
  REQUIRE(at.has_value());
  CHECK(*at == doctest::Approx(2.5).epsilon(1e-12));
  CHECK_FALSE(ebno_at_target(records, "mstar", 4, 6, 1e-9).has_value());
  CHECK_FALSE(ebno_at_target(records, "rs", 4, 6, 1e-3).has_value());
}
