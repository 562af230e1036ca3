#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here recomputes results from first principles (dense linear
// arithmetic, exhaustive enumeration, polynomial series) and stays off the
// library's trellis code paths.

#include <cstdint>
#include <span>
#include <vector>

#include "tq/channel.hpp"
#include "tq/conv_code.hpp"
#include "tq/equalizer.hpp"

namespace tq::oracle {

struct LinearExactResult {
  PosteriorResult posterior;
  // alpha[t][state], linear domain, t = 0..L+S (t = 0 is the root level).
  std::vector<std::vector<double>> alpha;
  double total = 0.0;  // sum over all paths of the joint metric
};

// Dense linear-domain forward/backward pass over all 2^(KS) states.
LinearExactResult linear_exact_posterior(const ChannelSpec& spec,
                                         std::span<const Complex> received,
                                         std::span<const double> apriori);

// Straight-line transcription of the merge-based reduced forward recursion
// (expand, accumulate, select the M best, merge the rest into their nearest
// survivors), executed in linear arithmetic over explicit branch lists.
PosteriorResult linear_mstar_posterior(const ChannelSpec& spec,
                                       std::span<const Complex> received,
                                       std::span<const double> apriori,
                                       int state_budget);

// Hand-rolled top-M pruned dynamic program (deletion, not merging).
PosteriorResult top_m_pruned_posterior(const ChannelSpec& spec,
                                       std::span<const Complex> received,
                                       std::span<const double> apriori,
                                       int state_budget);

// MAP decoding of the terminated code by enumerating all 2^n_info codewords.
CodeSisoResult enumerate_code_map(const ConvCodeSpec& spec,
                                  std::span<const double> apriori_coded);

// Parity stream of the recursive systematic encoder obtained by polynomial
// series division: p = feedforward * info / feedback mod x^n.
std::vector<std::uint8_t> series_parity(const ConvCodeSpec& spec,
                                        std::span<const std::uint8_t> info,
                                        std::size_t n);

// A random equalizer problem drawn from a transmission: real Gaussian taps
// normalized to unit gain, uniform a priori LLRs in [-3, 3], noise variance
// in [0.3, 2].
struct Instance {
  ChannelSpec spec;
  std::vector<Complex> received;
  LlrSequence apriori;
};
Instance make_random_instance(std::uint64_t seed, int k, int s, int symbols);

// Largest absolute difference between two LLR sequences.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

// Literal linear-domain branch metric (prior product times Gaussian factor),
// for log-compared spot checks of the library metric.
double linear_branch_metric(const ChannelSpec& spec,
                            std::span<const Complex> received,
                            std::span<const double> clamped_apriori, int time,
                            StateIndex state, std::uint32_t input, int symbols);

}  // namespace tq::oracle
