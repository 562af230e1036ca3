#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tq/equalizer.hpp"
#include "tq/link.hpp"

namespace tq {

struct IterationStat {
  int bit_errors = 0;
  bool frame_error = false;
  double mean_abs_extrinsic = 0.0;  // equalizer output side
};

using IterationTrace = std::vector<IterationStat>;

// Immutable per-scenario context: built permutation plus the channel spec
// skeleton (noise variance is set per simulation point).
struct TurboSystem {
  ScenarioSpec scenario;
  Permutation permutation;
  ChannelSpec channel;
};

TurboSystem make_turbo_system(const ScenarioSpec& scenario);

// The iterative receiver: equalize, deinterleave, decode, interleave, with
// extrinsic values only crossing between the two halves. Runs the configured
// iteration count; errors are counted on the decoder's information-bit
// posteriors each iteration.
IterationTrace run_turbo(const TurboSystem& system, const EqualizerConfig& eq,
                         double noise_variance,
                         std::span<const Complex> received,
                         std::span<const std::uint8_t> true_info);

// Draws an information block and channel noise from `block_seed`, transmits,
// and runs the receiver. The seed fixes bits and noise independently of the
// equalizer configuration, so algorithms are compared on identical blocks.
IterationTrace simulate_block(const TurboSystem& system,
                              const EqualizerConfig& eq,
                              double noise_variance, std::uint64_t block_seed);

}  // namespace tq
