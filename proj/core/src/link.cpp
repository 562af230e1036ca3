#include "tq/link.hpp"

#include <cmath>
#include <stdexcept>

#include "tq/rng.hpp"

namespace tq {

Permutation InterleaverSpec::build(std::size_t size) const {
  switch (kind) {
    case Kind::drp:
      return make_drp(size, read_dither, write_dither, prime, offset);
    case Kind::random:
      return make_random_permutation(size, seed);
    case Kind::file: {
      Permutation p = load_permutation_file(path);
      if (p.size() != size)
        throw std::invalid_argument("interleaver file size does not match the coded block");
      return p;
    }
  }
  throw std::invalid_argument("interleaver: unknown kind");
}

double ScenarioSpec::channel_gain() const {
  double g = 0.0;
  for (const Complex& h : taps) g += std::norm(h);
  return g;
}

void ScenarioSpec::validate() const {
  code.validate();
  if (info_bits < 1) throw std::invalid_argument("scenario: info bits must be >= 1");
  if (iterations < 1) throw std::invalid_argument("scenario: iterations must be >= 1");
  if (taps.empty() || std::norm(taps[0]) == 0.0)
    throw std::invalid_argument("scenario: channel taps must start with a nonzero h_0");
  if (coded_bits() % bits_per_symbol(modulation) != 0)
    throw std::invalid_argument("scenario: coded length must be a multiple of bits per symbol");
}

namespace {

// Fixed window-8 dither patterns for the built-in scenarios; deliberately
// non-affine so the local dither breaks the regularity of the relative-prime
// map. Primes sit near size/golden-ratio, adjusted to odd.
constexpr std::uint32_t kReadDither[8] = {2, 6, 1, 7, 4, 0, 5, 3};
constexpr std::uint32_t kWriteDither[8] = {5, 1, 6, 0, 3, 7, 2, 4};

InterleaverSpec default_drp(std::uint64_t prime, std::uint64_t offset) {
  InterleaverSpec spec;
  spec.kind = InterleaverSpec::Kind::drp;
  spec.read_dither.assign(kReadDither, kReadDither + 8);
  spec.write_dither.assign(kWriteDither, kWriteDither + 8);
  spec.prime = prime;
  spec.offset = offset;
  return spec;
}

}  // namespace

ScenarioSpec scenario1() {
  ScenarioSpec s;
  s.name = "scenario1";
  s.code = ConvCodeSpec{};
  s.interleaver = default_drp(633, 409);
  s.taps = {Complex{std::sqrt(0.45)}, Complex{std::sqrt(0.25)},
            Complex{std::sqrt(0.15)}, Complex{std::sqrt(0.10)},
            Complex{std::sqrt(0.05)}};
  s.modulation = Modulation::bpsk;
  s.info_bits = 507;
  s.iterations = 6;
  for (double e = 2.0; e <= 7.01; e += 0.5) s.ebno_grid_db.push_back(e);
  return s;
}

ScenarioSpec scenario2() {
  ScenarioSpec s;
  s.name = "scenario2";
  s.code = ConvCodeSpec{};
  s.interleaver = default_drp(2531, 1639);
  s.taps = {Complex{1.0}, Complex{1.0}, Complex{1.0}};
  s.modulation = Modulation::qam16_gray;
  s.info_bits = 2043;
  s.iterations = 6;
  for (double e = 4.0; e <= 14.01; e += 1.0) s.ebno_grid_db.push_back(e);
  return s;
}

std::vector<std::string> builtin_scenario_names() {
  return {"scenario1", "scenario2"};
}

ScenarioSpec builtin_scenario(const std::string& name) {
  if (name == "scenario1") return scenario1();
  if (name == "scenario2") return scenario2();
  throw std::invalid_argument("unknown scenario: " + name);
}

std::vector<Complex> map_symbols(Modulation mod,
                                 std::span<const std::uint8_t> bits) {
  const int k = bits_per_symbol(mod);
  if (bits.size() % static_cast<std::size_t>(k) != 0)
    throw std::invalid_argument("map_symbols: bit count not divisible by bits per symbol");
  const std::vector<Complex> points = constellation_points(mod);
  std::vector<Complex> symbols(bits.size() / k);
  for (std::size_t t = 0; t < symbols.size(); ++t) {
    std::uint32_t label = 0;
    for (int b = 0; b < k; ++b)
      label = label << 1 | (bits[t * k + b] & 1u);
    symbols[t] = points[label];
  }
  return symbols;
}

std::vector<Complex> apply_channel(const ChannelSpec& spec,
                                   std::span<const Complex> symbols,
                                   std::uint64_t seed) {
  const int s = spec.memory();
  const std::size_t out_len = symbols.size() + static_cast<std::size_t>(s);
  std::vector<Complex> received(out_len);
  GaussianSampler noise(seed);
  const double sigma_dim = std::sqrt(spec.noise_variance / 2.0);
  for (std::size_t i = 0; i < out_len; ++i) {
    Complex y{0.0, 0.0};
    for (int j = 0; j <= s; ++j) {
      const std::ptrdiff_t t = static_cast<std::ptrdiff_t>(i) - j;
      if (t >= 0 && t < static_cast<std::ptrdiff_t>(symbols.size()))
        y += spec.taps[j] * symbols[t];
    }
    received[i] = y + sigma_dim * Complex{noise.next(), noise.next()};
  }
  return received;
}

double noise_variance_for(double ebno_db, const ScenarioSpec& scenario) {
  const double es = 1.0;  // unit-energy constellations
  const double gain = scenario.channel_gain();
  const double rate = scenario.code_rate();
  const int k = bits_per_symbol(scenario.modulation);
  const double ebno = std::pow(10.0, ebno_db / 10.0);
  return es * gain / (2.0 * rate * k * ebno);
}

}  // namespace tq
