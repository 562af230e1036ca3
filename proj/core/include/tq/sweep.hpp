#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tq/equalizer.hpp"
#include "tq/link.hpp"

namespace tq {

struct BerRecord {
  std::string scenario;
  std::string algorithm;
  int budget = 0;
  double ebno_db = 0.0;
  int iteration = 0;           // 1-based
  long long bit_errors = 0;
  long long bits = 0;
  long long frames = 0;
  long long frame_errors = 0;
  std::uint64_t seed = 0;

  double ber() const {
    return bits > 0 ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0;
  }
  friend bool operator==(const BerRecord&, const BerRecord&) = default;
};

struct SweepConfig {
  ScenarioSpec scenario;
  std::vector<EqualizerConfig> equalizers;
  std::vector<double> ebno_db;          // falls back to the scenario grid
  long long min_errors = 200;           // final-iteration stop threshold
  long long max_blocks = 100000;
  bool allow_low_confidence = false;    // permits min_errors < 100
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;                      // CSV path; empty = caller handles IO

  void validate() const;
};

using SweepProgress =
    std::function<void(const EqualizerConfig&, double ebno_db,
                       long long blocks, long long final_errors)>;

// Simulates each (equalizer, Eb/N0) point until the final-iteration error
// count reaches min_errors or max_blocks is hit, in fixed-size batches so the
// simulated block set does not depend on the thread count. Blocks are seeded
// from (seed, scenario, block index) only: every equalizer sees the same
// transmissions. Returns one record per iteration per point.
std::vector<BerRecord> run_sweep(const SweepConfig& cfg,
                                 const SweepProgress& progress = {});

// CSV, one row per record:
// scenario,algorithm,budget,ebno_db,iteration,bit_errors,bits,frames,frame_errors,seed
void write_ber_csv(std::ostream& out, std::span<const BerRecord> records);
void write_ber_csv_file(const std::string& path,
                        std::span<const BerRecord> records);
std::vector<BerRecord> read_ber_csv(std::istream& in);
std::vector<BerRecord> read_ber_csv_file(const std::string& path);

// Eb/N0 at which the curve for (algorithm, budget, iteration) crosses the
// target BER, by log-linear interpolation between adjacent grid points.
// Zero-error points are floored at half an error. Empty when the target is
// not bracketed.
std::optional<double> ebno_at_target(std::span<const BerRecord> records,
                                     const std::string& algorithm, int budget,
                                     int iteration, double target_ber);

}  // namespace tq
