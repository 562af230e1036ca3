#include "tq/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace tq {

int bits_per_symbol(Modulation mod) {
  return mod == Modulation::bpsk ? 1 : 4;
}

const char* modulation_name(Modulation mod) {
  return mod == Modulation::bpsk ? "bpsk" : "16qam";
}

std::vector<Complex> constellation_points(Modulation mod) {
  if (mod == Modulation::bpsk) return {Complex{1.0, 0.0}, Complex{-1.0, 0.0}};

  // Per-axis Gray map over two label bits: 00 -> -3, 01 -> -1, 11 -> +1,
  // 10 -> +3, scaled to unit average energy.
  static constexpr double kLevel[4] = {-3.0, -1.0, +1.0, +3.0};
  auto gray_level = [](unsigned pair) {
    static constexpr unsigned kRank[4] = {0, 1, 3, 2};  // label pair -> level rank
    return kLevel[kRank[pair]];
  };
  const double scale = 1.0 / std::sqrt(10.0);
  std::vector<Complex> points(16);
  for (unsigned label = 0; label < 16; ++label) {
    points[label] = scale * Complex{gray_level(label >> 2), gray_level(label & 3)};
  }
  return points;
}

double ChannelSpec::gain() const {
  double g = 0.0;
  for (const Complex& h : taps) g += std::norm(h);
  return g;
}

void ChannelSpec::validate() const {
  if (taps.empty()) throw std::invalid_argument("channel: no taps");
  if (std::norm(taps[0]) == 0.0) throw std::invalid_argument("channel: h_0 must be nonzero");
  if (!(noise_variance > 0.0)) throw std::invalid_argument("channel: noise variance must be positive");
  if (bits_per_symbol < 1) throw std::invalid_argument("channel: bits per symbol must be >= 1");
  const std::size_t expected = std::size_t{1} << bits_per_symbol;
  if (constellation.size() != expected)
    throw std::invalid_argument("channel: constellation must hold 2^K points");
  double energy = 0.0;
  for (std::size_t i = 0; i < constellation.size(); ++i) {
    energy += std::norm(constellation[i]);
    for (std::size_t j = i + 1; j < constellation.size(); ++j)
      if (constellation[i] == constellation[j])
        throw std::invalid_argument("channel: constellation points must be distinct");
  }
  energy /= static_cast<double>(constellation.size());
  if (std::abs(energy - 1.0) > 1e-12)
    throw std::invalid_argument("channel: constellation must have unit average energy");
  if (bits_per_symbol * memory() > 20)
    throw std::invalid_argument("channel: K*S above the supported trellis size");
}

ChannelSpec make_channel(std::vector<Complex> taps, Modulation mod,
                         double noise_variance) {
  ChannelSpec spec;
  spec.taps = std::move(taps);
  spec.noise_variance = noise_variance;
  spec.bits_per_symbol = bits_per_symbol(mod);
  spec.constellation = constellation_points(mod);
  spec.validate();
  return spec;
}

}  // namespace tq
