#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "tq/channel.hpp"
#include "tq/log_domain.hpp"

namespace tq {

// A trellis state is the S most recent K-bit inputs packed into an integer,
// most recent tuple in the low K bits.
using StateIndex = std::uint32_t;

inline StateIndex state_count(int k, int s) {
  return StateIndex{1} << (k * s);
}

// Shift `input` into the most-recent slot; the oldest tuple falls off.
inline StateIndex successor_state(StateIndex state, std::uint32_t input,
                                  int k, int s) {
  const StateIndex mask = state_count(k, s) - 1;
  return ((state << k) | input) & mask;
}

// Smallest d in [0, S] such that the states agree on their S-d most recent
// K-tuples; 0 iff equal.
inline int state_distance(StateIndex a, StateIndex b, int k, int s) {
  const StateIndex diff = a ^ b;
  if (diff == 0) return 0;
  return s - std::countr_zero(diff) / k;
}

// Log branch metric: sum of per-bit input priors minus the scaled residual
// ||received - sum_j h_j x_{i-j}||^2 / sigma^2. The Gaussian prefactor is a
// per-section constant and is dropped. Bit j of `valid_taps` marks whether
// time index i-j falls inside the transmitted block; cleared slots contribute
// the zero symbol x = 0.
double branch_metric(const ChannelSpec& spec, Complex received,
                     StateIndex history, std::uint32_t input,
                     std::span<const double> bit_priors,
                     std::uint32_t valid_taps = ~0u);

// Per-block precomputation shared by every equalizer pass: noiseless filter
// outputs per (history, input) pair and per-section input-tuple prior sums.
// Section indices are 0-based; section t carries symbol time i = t + 1.
class BranchMetricTable {
 public:
  BranchMetricTable(const ChannelSpec& spec, std::span<const Complex> received,
                    std::span<const double> apriori_clamped);

  double gamma(int section, StateIndex origin, std::uint32_t input) const;

  int symbol_count() const { return symbols_; }          // L
  int section_count() const { return symbols_ + memory_; }
  int memory() const { return memory_; }                 // S
  int bits_per_symbol() const { return bits_; }          // K
  double prior(int section, std::uint32_t input) const {
    return priors_[static_cast<std::size_t>(section) << bits_ | input];
  }

 private:
  double gamma_masked(int section, StateIndex origin, std::uint32_t input) const;

  const ChannelSpec* spec_;
  std::vector<Complex> received_;
  std::vector<Complex> filter_;   // f[(state << K) | input], full-history regime
  std::vector<double> priors_;    // [section << K | input], 0 for tail sections
  double inv_sigma2_;
  int symbols_;
  int memory_;
  int bits_;
};

}  // namespace tq
