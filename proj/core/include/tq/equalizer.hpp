#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tq/channel.hpp"
#include "tq/log_domain.hpp"
#include "tq/trellis.hpp"

namespace tq {

enum class Algorithm { exact, rs, m, mstar };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct EqualizerConfig {
  Algorithm algorithm = Algorithm::exact;
  int state_budget = 0;    // M, for m / mstar
  int reduced_memory = 0;  // S', for rs

  // The configured parameter (M or S'); 0 for exact.
  int budget() const;
  void validate(const ChannelSpec& spec) const;
};

struct TrellisNode {
  StateIndex state;
  double alpha;  // forward metric, normalized per section
  double beta;   // backward metric, filled by backward_recursion
};

struct TrellisBranch {
  std::uint32_t origin;  // slot in the previous section's node list
  std::uint32_t target;  // slot in this section's node list; merging redirects it
  std::uint16_t input;   // K-bit tuple; unused for tail sections
  double gamma;
};

// Section t (0-based) covers symbol time i = t + 1: branches leave the nodes
// of section t-1 (the single all-zero root for t = 0) and end in this
// section's nodes.
struct TrellisSection {
  std::vector<TrellisNode> nodes;  // survivors, sorted by state index
  std::vector<TrellisBranch> branches;
  // Forward mass immediately before/after state reduction, in the section's
  // local alpha scale. Populated only when diagnostics are requested.
  double mass_before_reduction = 0.0;
  double mass_after_reduction = 0.0;
};

struct Trellis {
  int bits_per_symbol = 1;  // K
  int memory = 0;           // S
  int symbol_count = 0;     // L
  std::vector<TrellisSection> sections;  // L + S entries
  // Cumulative normalization subtracted from alpha up to each section; the
  // true forward metric of a node is alpha + alpha_shift[t].
  std::vector<double> alpha_shift;

  int section_count() const { return static_cast<int>(sections.size()); }
};

struct PosteriorResult {
  LlrSequence aposteriori;  // L, one per input bit
  LlrSequence extrinsic;    // L - L_a against the clamped a priori values
};

// Forward pass: expands branches from the surviving states of each section,
// accumulates alpha, then applies the configured reduction (none, static
// class merging, top-M deletion, or top-M merging).
Trellis forward_recursion(const ChannelSpec& spec,
                          std::span<const Complex> received,
                          std::span<const double> apriori,
                          const EqualizerConfig& config,
                          bool diagnostics = false);

// Fills beta over the surviving states, walking only visited branches.
void backward_recursion(Trellis& trellis);

// Per-bit log-sum of alpha+gamma+beta over the branches on each label side.
// A side left without support saturates at the LLR clamp.
PosteriorResult completion(const Trellis& trellis,
                           std::span<const double> apriori);

PosteriorResult run_exact_bcjr(const ChannelSpec& spec,
                               std::span<const Complex> received,
                               std::span<const double> apriori);
PosteriorResult run_rs_bcjr(const ChannelSpec& spec,
                            std::span<const Complex> received,
                            std::span<const double> apriori,
                            int reduced_memory);
PosteriorResult run_m_bcjr(const ChannelSpec& spec,
                           std::span<const Complex> received,
                           std::span<const double> apriori, int state_budget);
PosteriorResult run_mstar_bcjr(const ChannelSpec& spec,
                               std::span<const Complex> received,
                               std::span<const double> apriori,
                               int state_budget);
PosteriorResult run_equalizer(const ChannelSpec& spec,
                              std::span<const Complex> received,
                              std::span<const double> apriori,
                              const EqualizerConfig& config);

// Direct evaluation of the posterior by enumerating all 2^(LK) input
// sequences. Guarded to LK <= 20.
PosteriorResult brute_force_posterior(const ChannelSpec& spec,
                                      std::span<const Complex> received,
                                      std::span<const double> apriori);
inline constexpr int kBruteForceMaxBits = 20;

}  // namespace tq
