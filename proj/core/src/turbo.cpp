#include "tq/turbo.hpp"

#include <cmath>
#include <stdexcept>

#include "tq/rng.hpp"

namespace tq {

TurboSystem make_turbo_system(const ScenarioSpec& scenario) {
  scenario.validate();
  TurboSystem sys;
  sys.scenario = scenario;
  sys.permutation = scenario.interleaver.build(scenario.coded_bits());
  sys.channel = make_channel(scenario.taps, scenario.modulation, 1.0);
  return sys;
}

IterationTrace run_turbo(const TurboSystem& system, const EqualizerConfig& eq,
                         double noise_variance,
                         std::span<const Complex> received,
                         std::span<const std::uint8_t> true_info) {
  const ScenarioSpec& sc = system.scenario;
  if (static_cast<int>(true_info.size()) != sc.info_bits)
    throw std::invalid_argument("run_turbo: info length mismatch");
  const int coded = sc.coded_bits();
  ChannelSpec channel = system.channel;
  channel.noise_variance = noise_variance;

  IterationTrace trace;
  trace.reserve(sc.iterations);

  // Extrinsic-only message passing; the first pass sees a flat prior.
  LlrSequence apriori_eq(coded, 0.0);
  for (int iter = 0; iter < sc.iterations; ++iter) {
    const PosteriorResult eq_out =
        run_equalizer(channel, received, apriori_eq, eq);

    double mean_abs = 0.0;
    for (const double v : eq_out.extrinsic) mean_abs += std::abs(v);
    mean_abs /= static_cast<double>(coded);

    const LlrSequence apriori_dec = deinterleave<double>(
        system.permutation, eq_out.extrinsic);
    const CodeSisoResult dec = decode_siso(sc.code, apriori_dec);

    IterationStat stat;
    stat.mean_abs_extrinsic = mean_abs;
    const std::vector<std::uint8_t> decided = hard_decision(dec.aposteriori_info);
    for (int i = 0; i < sc.info_bits; ++i)
      stat.bit_errors += decided[i] != (true_info[i] & 1);
    stat.frame_error = stat.bit_errors > 0;
    trace.push_back(stat);

    if (iter + 1 < sc.iterations)
      apriori_eq = interleave<double>(system.permutation, dec.extrinsic_coded);
  }
  return trace;
}

IterationTrace simulate_block(const TurboSystem& system,
                              const EqualizerConfig& eq,
                              double noise_variance,
                              std::uint64_t block_seed) {
  const ScenarioSpec& sc = system.scenario;
  std::mt19937_64 bit_engine(derive_seed(block_seed, 0));
  std::vector<std::uint8_t> info(sc.info_bits);
  for (int i = 0; i < sc.info_bits; ++i)
    info[i] = static_cast<std::uint8_t>(bit_engine() >> 40 & 1u);

  const std::vector<std::uint8_t> coded = encode(sc.code, info);
  const std::vector<std::uint8_t> permuted =
      interleave<std::uint8_t>(system.permutation, coded);
  const std::vector<Complex> symbols = map_symbols(sc.modulation, permuted);

  ChannelSpec channel = system.channel;
  channel.noise_variance = noise_variance;
  const std::vector<Complex> received =
      apply_channel(channel, symbols, derive_seed(block_seed, 1));

  return run_turbo(system, eq, noise_variance, received, info);
}

}  // namespace tq
