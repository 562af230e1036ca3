#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace tq {

// Probabilities are kept as natural-log values; -inf represents an exact
// probability of zero.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// LLR magnitudes are clamped to this value before use (e^-40 ~ 4e-18, far
// below every tolerance in the test suite).
inline constexpr double kLlrClamp = 40.0;

// ln(e^a + e^b) without overflow. Exact log-sum, no max-log shortcut.
inline double log_sum(double a, double b) {
  const double hi = a > b ? a : b;
  if (hi == kLogZero) return kLogZero;  // both inputs are probability zero
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

// log P(a = sign) for a bit with a priori LLR `la`:
// P(a = +1) = exp(la) / (1 + exp(la)), and symmetrically for a = -1.
inline double prior_from_llr(double la, int sign) {
  const double x = sign >= 0 ? la : -la;
  return std::min(x, 0.0) - std::log1p(std::exp(-std::abs(x)));
}

inline double clamp_llr(double v) {
  return std::clamp(v, -kLlrClamp, kLlrClamp);
}

// One real LLR per bit position (a priori, a posteriori or extrinsic).
using LlrSequence = std::vector<double>;

LlrSequence clamp_llrs(std::span<const double> llrs);

}  // namespace tq
