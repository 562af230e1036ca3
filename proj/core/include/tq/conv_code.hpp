#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tq/log_domain.hpp"

namespace tq {

// Recursive systematic rate-1/2 convolutional code with trellis termination.
// Polynomials are bit masks over x^0..x^memory (x^0 in the low bit); the
// feedback polynomial must have a nonzero constant term.
struct ConvCodeSpec {
  int memory = 5;
  unsigned feedback = 067;     // 1 + x + x^2 + x^4 + x^5
  unsigned feedforward = 045;  // 1 + x^2 + x^5

  int states() const { return 1 << memory; }
  void validate() const;
};

// Systematic and parity bits interleaved per step; after the information
// block, `memory` termination steps drive the encoder state to zero, so the
// output holds 2 * (info + memory) bits.
std::vector<std::uint8_t> encode(const ConvCodeSpec& spec,
                                 std::span<const std::uint8_t> info);

struct CodeSisoResult {
  LlrSequence extrinsic_coded;    // one per coded bit, termination included
  LlrSequence aposteriori_info;   // one per information bit
};

// Per-step flow constants of the code trellis, for conservation checks.
struct CodeSisoDiag {
  std::vector<double> flow;
};

// Exact forward/backward pass over the terminated code trellis. The a priori
// values cover every coded bit (2 per step) and are clamped on entry.
CodeSisoResult decode_siso(const ConvCodeSpec& spec,
                           std::span<const double> apriori_coded,
                           CodeSisoDiag* diag = nullptr);

// 0 where the LLR is >= 0 (positive favors amplitude +1, which carries
// bit 0), else 1.
std::vector<std::uint8_t> hard_decision(std::span<const double> llrs);

}  // namespace tq
