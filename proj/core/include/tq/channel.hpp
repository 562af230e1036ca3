#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace tq {

using Complex = std::complex<double>;

enum class Modulation { bpsk, qam16_gray };

int bits_per_symbol(Modulation mod);
const char* modulation_name(Modulation mod);

// Label-indexed constellation with unit average symbol energy.
// BPSK: label 0 -> +1, label 1 -> -1.
// 16QAM: the two high label bits pick the in-phase level, the two low bits
// the quadrature level, each pair Gray coded 00/01/11/10 -> -3/-1/+1/+3,
// scaled by 1/sqrt(10).
std::vector<Complex> constellation_points(Modulation mod);

// Discrete-time ISI channel as seen by the equalizer: FIR taps h_0..h_S,
// noise level, and the bit-labelled symbol alphabet.
struct ChannelSpec {
  std::vector<Complex> taps;           // h_0..h_S, h_0 != 0
  double noise_variance = 1.0;         // sigma^2 in exp(-||.||^2 / sigma^2)
  int bits_per_symbol = 1;             // K
  std::vector<Complex> constellation;  // 2^K points, indexed by bit label

  int memory() const { return static_cast<int>(taps.size()) - 1; }  // S
  double gain() const;                 // sum_j |h_j|^2

  // Throws std::invalid_argument on any violated field constraint.
  void validate() const;
};

ChannelSpec make_channel(std::vector<Complex> taps, Modulation mod,
                         double noise_variance);

}  // namespace tq
