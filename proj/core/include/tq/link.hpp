#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tq/channel.hpp"
#include "tq/conv_code.hpp"
#include "tq/interleaver.hpp"

namespace tq {

struct InterleaverSpec {
  enum class Kind { drp, random, file };
  Kind kind = Kind::drp;
  // drp
  std::vector<std::uint32_t> read_dither;
  std::vector<std::uint32_t> write_dither;
  std::uint64_t prime = 0;
  std::uint64_t offset = 0;
  // random
  std::uint64_t seed = 0;
  // file
  std::string path;

  Permutation build(std::size_t size) const;
};

// Everything needed to simulate one turbo-equalized link.
struct ScenarioSpec {
  std::string name;
  ConvCodeSpec code;
  InterleaverSpec interleaver;
  std::vector<Complex> taps;
  Modulation modulation = Modulation::bpsk;
  int info_bits = 0;
  int iterations = 6;
  std::vector<double> ebno_grid_db;

  int coded_bits() const { return 2 * (info_bits + code.memory); }
  int symbols_per_block() const {
    return coded_bits() / bits_per_symbol(modulation);
  }
  int channel_memory() const { return static_cast<int>(taps.size()) - 1; }
  double code_rate() const {
    return static_cast<double>(info_bits) / coded_bits();
  }
  double channel_gain() const;

  void validate() const;
};

// The two built-in scenarios: BPSK over a 5-tap channel with 507-bit blocks,
// and Gray 16QAM over a 3-tap channel with 2043-bit blocks.
ScenarioSpec scenario1();
ScenarioSpec scenario2();
std::vector<std::string> builtin_scenario_names();
ScenarioSpec builtin_scenario(const std::string& name);

// Serial bits to constellation symbols, K bits per symbol, first bit of each
// group in the high label position.
std::vector<Complex> map_symbols(Modulation mod,
                                 std::span<const std::uint8_t> bits);

// FIR filtering plus circular complex AWGN. Output length L + S; the input
// block is zero outside [1, L]. Noise is drawn per complex dimension with
// variance sigma^2/2, so E||n||^2 = sigma^2 matches the branch-metric scale.
std::vector<Complex> apply_channel(const ChannelSpec& spec,
                                   std::span<const Complex> symbols,
                                   std::uint64_t seed);

// sigma^2 = Es * G / (2 * R * K * 10^(EbN0/10)) with Es = 1; the accounting
// includes channel gain and the termination overhead in the code rate.
double noise_variance_for(double ebno_db, const ScenarioSpec& scenario);

}  // namespace tq
