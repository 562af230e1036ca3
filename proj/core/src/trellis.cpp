#include "tq/trellis.hpp"

#include <stdexcept>

namespace tq {

double branch_metric(const ChannelSpec& spec, Complex received,
                     StateIndex history, std::uint32_t input,
                     std::span<const double> bit_priors,
                     std::uint32_t valid_taps) {
  if (!(spec.noise_variance > 0.0))
    throw std::invalid_argument("branch_metric: noise variance must be positive");
  const int k = spec.bits_per_symbol;
  const int s = spec.memory();
  const std::uint32_t tuple_mask = (1u << k) - 1;

  double prior = 0.0;
  for (std::size_t i = 0; i < bit_priors.size(); ++i) prior += bit_priors[i];

  Complex filtered{0.0, 0.0};
  if (valid_taps & 1u) filtered += spec.taps[0] * spec.constellation[input];
  for (int j = 1; j <= s; ++j) {
    if (!(valid_taps >> j & 1u)) continue;  // empty slot: x = 0
    const std::uint32_t tuple = history >> ((j - 1) * k) & tuple_mask;
    filtered += spec.taps[j] * spec.constellation[tuple];
  }
  return prior - std::norm(received - filtered) / spec.noise_variance;
}

BranchMetricTable::BranchMetricTable(const ChannelSpec& spec,
                                     std::span<const Complex> received,
                                     std::span<const double> apriori_clamped)
    : spec_(&spec),
      received_(received.begin(), received.end()),
      inv_sigma2_(1.0 / spec.noise_variance),
      memory_(spec.memory()),
      bits_(spec.bits_per_symbol) {
  symbols_ = static_cast<int>(apriori_clamped.size()) / bits_;
  const std::uint32_t inputs = 1u << bits_;

  // Noiseless filter outputs over the full (S+1)-tuple symbol history.
  // Skipped for very long histories; gamma() then always takes the masked path.
  if (bits_ * (memory_ + 1) <= 16) {
    filter_.assign(std::size_t{1} << (bits_ * (memory_ + 1)), Complex{});
    const std::uint32_t tuple_mask = inputs - 1;
    for (std::size_t m = 0; m < filter_.size(); ++m) {
      Complex f{0.0, 0.0};
      for (int j = 0; j <= memory_; ++j)
        f += spec.taps[j] * spec.constellation[m >> (j * bits_) & tuple_mask];
      filter_[m] = f;
    }
  }

  // Per-section input-tuple prior sums; tail sections carry the empty input
  // with probability one.
  priors_.assign(static_cast<std::size_t>(section_count()) << bits_, 0.0);
  for (int t = 0; t < symbols_; ++t) {
    for (std::uint32_t u = 0; u < inputs; ++u) {
      double sum = 0.0;
      for (int b = 0; b < bits_; ++b) {
        const int bit = u >> (bits_ - 1 - b) & 1u;
        sum += prior_from_llr(apriori_clamped[t * bits_ + b], bit == 0 ? +1 : -1);
      }
      priors_[static_cast<std::size_t>(t) << bits_ | u] = sum;
    }
  }
}

double BranchMetricTable::gamma(int section, StateIndex origin,
                                std::uint32_t input) const {
  // Middle regime: every tap lands inside the block.
  if (!filter_.empty() && section >= memory_ && section < symbols_) {
    const std::size_t m = (std::size_t{origin} << bits_) | input;
    return priors_[static_cast<std::size_t>(section) << bits_ | input] -
           std::norm(received_[section] - filter_[m]) * inv_sigma2_;
  }
  return gamma_masked(section, origin, input);
}

double BranchMetricTable::gamma_masked(int section, StateIndex origin,
                                       std::uint32_t input) const {
  const int i = section + 1;  // symbol time, 1-based
  const std::uint32_t tuple_mask = (1u << bits_) - 1;
  Complex f{0.0, 0.0};
  if (i <= symbols_) f += spec_->taps[0] * spec_->constellation[input];
  for (int j = 1; j <= memory_; ++j) {
    const int time = i - j;
    if (time < 1 || time > symbols_) continue;
    f += spec_->taps[j] * spec_->constellation[origin >> ((j - 1) * bits_) & tuple_mask];
  }
  const double prior =
      i <= symbols_ ? priors_[static_cast<std::size_t>(section) << bits_ | input] : 0.0;
  return prior - std::norm(received_[section] - f) * inv_sigma2_;
}

}  // namespace tq
