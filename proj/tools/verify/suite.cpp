#include "verify/suite.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "tq/equalizer.hpp"
#include "tq/interleaver.hpp"
#include "tq/link.hpp"
#include "tq/rng.hpp"
#include "tq/sweep.hpp"
#include "tq/turbo.hpp"
#include "verify/oracles.hpp"

namespace tq::verify {

namespace {

constexpr std::uint64_t kSuiteSeed = 0x5eedc0dedec0de01ULL;

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

CheckResult pass(std::string name, std::string detail = "") {
  return {std::move(name), true, std::move(detail)};
}

CheckResult fail(std::string name, std::string detail) {
  return {std::move(name), false, std::move(detail)};
}

double posterior_diff(const PosteriorResult& a, const PosteriorResult& b) {
  return std::max(oracle::max_abs_diff(a.aposteriori, b.aposteriori),
                  oracle::max_abs_diff(a.extrinsic, b.extrinsic));
}

// Per-section log-sum of alpha+gamma+beta over all branches, on the true
// (unnormalized) scale.
std::vector<double> section_flows(const Trellis& tr) {
  std::vector<double> flows(tr.section_count());
  for (int t = 0; t < tr.section_count(); ++t) {
    double f = kLogZero;
    const TrellisSection& sec = tr.sections[t];
    for (const TrellisBranch& b : sec.branches) {
      const double a = t > 0 ? tr.sections[t - 1].nodes[b.origin].alpha : 0.0;
      f = log_sum(f, a + b.gamma + sec.nodes[b.target].beta);
    }
    flows[t] = f + (t > 0 ? tr.alpha_shift[t - 1] : 0.0);
  }
  return flows;
}

double flow_spread(std::span<const double> flows) {
  double lo = flows[0], hi = flows[0];
  for (const double f : flows) {
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  return hi - lo;
}

// Bit positions whose completion sums lack support on one label side.
int one_sided_bits(const Trellis& tr) {
  const int k = tr.bits_per_symbol;
  int count = 0;
  std::vector<double> pos(k), neg(k);
  for (int t = 0; t < tr.symbol_count; ++t) {
    const TrellisSection& sec = tr.sections[t];
    std::fill(pos.begin(), pos.end(), kLogZero);
    std::fill(neg.begin(), neg.end(), kLogZero);
    for (const TrellisBranch& b : sec.branches) {
      const double a = t > 0 ? tr.sections[t - 1].nodes[b.origin].alpha : 0.0;
      const double v = a + b.gamma + sec.nodes[b.target].beta;
      for (int bit = 0; bit < k; ++bit) {
        if (b.input >> (k - 1 - bit) & 1u)
          neg[bit] = log_sum(neg[bit], v);
        else
          pos[bit] = log_sum(pos[bit], v);
      }
    }
    for (int bit = 0; bit < k; ++bit)
      if (pos[bit] == kLogZero || neg[bit] == kLogZero) ++count;
  }
  return count;
}

// Equalizer-level block on the scenario-1 channel geometry.
struct ChannelBlock {
  ChannelSpec spec;
  std::vector<Complex> received;
  LlrSequence apriori;
};

ChannelBlock scenario1_block(std::uint64_t seed, double ebno_db,
                             bool random_priors) {
  const ScenarioSpec sc = scenario1();
  ChannelBlock blk;
  blk.spec = make_channel(sc.taps, sc.modulation, noise_variance_for(ebno_db, sc));
  GaussianSampler rng(seed);
  const int n_bits = sc.coded_bits();
  std::vector<std::uint8_t> bits(n_bits);
  for (std::uint8_t& b : bits) b = rng.raw() >> 40 & 1u;
  blk.received = apply_channel(blk.spec, map_symbols(sc.modulation, bits),
                               mix64(seed ^ 0x777ULL));
  blk.apriori.assign(n_bits, 0.0);
  if (random_priors)
    for (double& l : blk.apriori) l = -3.0 + 6.0 * rng.uniform01();
  return blk;
}

ScenarioSpec tiny_scenario() {
  ScenarioSpec s;
  s.name = "tiny";
  s.code = ConvCodeSpec{};
  s.interleaver.kind = InterleaverSpec::Kind::random;
  s.interleaver.seed = 99;
  s.taps = {Complex{std::sqrt(0.6)}, Complex{std::sqrt(0.4)}};
  s.modulation = Modulation::bpsk;
  s.info_bits = 53;
  s.iterations = 3;
  s.ebno_grid_db = {2.0, 4.0};
  return s;
}

}  // namespace

CheckResult check_log_domain() {
  const char* name = "log-domain arithmetic";
  if (std::abs(log_sum(0.0, 0.0) - std::log(2.0)) > 1e-12)
    return fail(name, "log_sum(0,0) != ln 2");
  if (log_sum(kLogZero, 1.25) != 1.25 || log_sum(1.25, kLogZero) != 1.25)
    return fail(name, "zero-probability identity broken");
  if (log_sum(kLogZero, kLogZero) != kLogZero)
    return fail(name, "log_sum(-inf,-inf) must stay -inf");
  if (std::abs(log_sum(1.0, 2.0) - 2.3132616875182228) > 1e-12)
    return fail(name, "log_sum(1,2) mismatch");
  if (std::abs(prior_from_llr(0.0, +1) - std::log(0.5)) > 1e-15)
    return fail(name, "flat prior mismatch");
  if (std::abs(prior_from_llr(std::log(3.0), +1) - std::log(0.75)) > 1e-12)
    return fail(name, "prior_from_llr(ln 3, +1) != ln 0.75");
  if (std::abs(prior_from_llr(-40.0, +1) + 40.0) > 1e-6)
    return fail(name, "saturated prior overflowed");

  GaussianSampler rng(kSuiteSeed);
  for (int i = 0; i < 1000; ++i) {
    const double la = -50.0 + 100.0 * rng.uniform01();
    const double total =
        std::exp(prior_from_llr(la, +1)) + std::exp(prior_from_llr(la, -1));
    if (std::abs(total - 1.0) > 1e-12)
      return fail(name, fmt("prior normalization off by %.3g at la=%.3g",
                            std::abs(total - 1.0), la));
    const double a = -50.0 + 100.0 * rng.uniform01();
    const double b = -50.0 + 100.0 * rng.uniform01();
    const double c = -50.0 + 100.0 * rng.uniform01();
    if (std::abs(log_sum(a, b) - log_sum(b, a)) > 1e-10)
      return fail(name, "log_sum not commutative");
    if (std::abs(log_sum(log_sum(a, b), c) - log_sum(a, log_sum(b, c))) > 1e-10)
      return fail(name, "log_sum not associative within tolerance");
    if (std::isnan(log_sum(a, b))) return fail(name, "NaN from log_sum");
  }
  return pass(name);
}

CheckResult check_state_ops() {
  const char* name = "state shift and distance";
  if (successor_state(0, 0, 1, 2) != 0) return fail(name, "zero history must absorb zero");
  if (successor_state(0b01, 1, 1, 2) != 0b11)
    return fail(name, "shift register mismatch for K=1,S=2");

  // K=2, S=2: every target state is hit by exactly 4 (state, input) pairs.
  std::vector<int> hits(16, 0);
  for (StateIndex s = 0; s < 16; ++s)
    for (std::uint32_t u = 0; u < 4; ++u) ++hits[successor_state(s, u, 2, 2)];
  for (const int h : hits)
    if (h != 4) return fail(name, "shift map is not 4-regular for K=2,S=2");

  if (state_distance(5, 5, 1, 4) != 0) return fail(name, "distance of equal states");
  if (state_distance(0b0001, 0b1001, 1, 4) != 1)
    return fail(name, "oldest-tuple mismatch should have distance 1");
  if (state_distance(0b0100, 0b0111, 2, 2) != 2)
    return fail(name, "most-recent tuple mismatch should have full distance");

  // For a fixed input, states sharing their oldest tuple map to distinct
  // successors. Exhaustive over a set of (K, S) shapes with KS <= 12.
  const int shapes[][2] = {{1, 4}, {2, 2}, {2, 3}, {3, 4}, {1, 12}};
  for (const auto& shape : shapes) {
    const int k = shape[0], s = shape[1];
    const StateIndex n = state_count(k, s);
    const std::uint32_t inputs = 1u << k;
    std::vector<std::uint8_t> seen(n);
    for (std::uint32_t u = 0; u < inputs; ++u) {
      for (std::uint32_t oldest = 0; oldest < inputs; ++oldest) {
        std::fill(seen.begin(), seen.end(), 0);
        for (StateIndex rest = 0; rest < (n >> k); ++rest) {
          const StateIndex state = oldest << ((s - 1) * k) | rest;
          const StateIndex next = successor_state(state, u, k, s);
          if (seen[next])
            return fail(name, "successor not injective on a fixed-oldest-tuple set");
          seen[next] = 1;
        }
      }
    }
  }
  return pass(name);
}

CheckResult check_branch_metric() {
  const char* name = "branch metric";
  {
    ChannelSpec spec = make_channel({Complex{0.8}, Complex{0.6}},
                                    Modulation::bpsk, 0.5);
    // Zero residual, flat prior: gamma = ln 0.5.
    const StateIndex history = 1;  // previous amplitude -1
    const Complex noiseless = spec.taps[0] * spec.constellation[0] +
                              spec.taps[1] * spec.constellation[1];
    const double flat[1] = {prior_from_llr(0.0, +1)};
    const double g = branch_metric(spec, noiseless, history, 0, flat);
    if (std::abs(g + 0.6931471805599453) > 1e-9)
      return fail(name, fmt("zero-residual gamma %.12f", g));
    // Residual energy equal to sigma^2: gamma = ln 0.5 - 1.
    const Complex off = noiseless + std::sqrt(spec.noise_variance);
    const double g2 = branch_metric(spec, off, history, 0, flat);
    if (std::abs(g2 + 0.6931471805599453 + 1.0) > 1e-9)
      return fail(name, fmt("unit-residual gamma %.12f", g2));
  }

  // Random 3-tap instances against the literal linear-domain product, and
  // invariance of metric differences to the dropped Gaussian prefactor.
  for (int trial = 0; trial < 25; ++trial) {
    const oracle::Instance inst =
        oracle::make_random_instance(mix64(kSuiteSeed + trial), 1, 2, 6);
    const LlrSequence la = clamp_llrs(inst.apriori);
    GaussianSampler pick(kSuiteSeed ^ (trial * 77ULL));
    const int time = 3;  // middle regime: all taps inside the block
    double prev_impl = 0.0, prev_lit = 0.0;
    for (int rep = 0; rep < 4; ++rep) {
      const StateIndex state = pick.raw() % state_count(1, 2);
      const std::uint32_t input = pick.raw() & 1u;
      const double priors[1] = {
          prior_from_llr(la[(time - 1) * 1], input == 0 ? +1 : -1)};
      const double impl = branch_metric(inst.spec, inst.received[time - 1],
                                        state, input, priors);
      const double lit = std::log(oracle::linear_branch_metric(
          inst.spec, inst.received, la, time, state, input, 6));
      if (std::abs(impl - lit) > 1e-9)
        return fail(name, fmt("linear-domain mismatch %.3g", std::abs(impl - lit)));
      const double lit_with_const =
          lit - 0.5 * std::log(2.0 * 3.14159265358979323846 * inst.spec.noise_variance);
      if (rep > 0 &&
          std::abs((impl - prev_impl) - (lit_with_const - prev_lit)) > 1e-10)
        return fail(name, "metric differences depend on the dropped constant");
      prev_impl = impl;
      prev_lit = lit_with_const;
    }
  }
  return pass(name);
}

CheckResult check_exact_vs_brute_force(int instances, double tol) {
  const char* name = "exact bcjr vs brute force";
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    GaussianSampler pick(mix64(kSuiteSeed ^ (0xbf00 + i)));
    const int s = static_cast<int>(pick.raw() % 3);       // S in [0, 2]
    const int symbols = 1 + static_cast<int>(pick.raw() % 6);  // L in [1, 6]
    const oracle::Instance inst =
        oracle::make_random_instance(mix64(kSuiteSeed + 1000 + i), 1, s, symbols);
    const PosteriorResult exact =
        run_exact_bcjr(inst.spec, inst.received, inst.apriori);
    const PosteriorResult brute =
        brute_force_posterior(inst.spec, inst.received, inst.apriori);
    worst = std::max(worst, posterior_diff(exact, brute));
  }
  if (worst > tol) return fail(name, fmt("max |diff| %.3g > %.1g", worst, tol));
  return pass(name, fmt("max |diff| %.3g over instances", worst));
}

CheckResult check_exact_vs_linear_dp(int instances, double tol) {
  const char* name = "exact bcjr vs linear-domain dp";
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    GaussianSampler pick(mix64(kSuiteSeed ^ (0x11d0 + i)));
    const int s = 1 + static_cast<int>(pick.raw() % 2);
    const int symbols = 4 + static_cast<int>(pick.raw() % 4);
    const oracle::Instance inst =
        oracle::make_random_instance(mix64(kSuiteSeed + 2000 + i), 1, s, symbols);
    const oracle::LinearExactResult lin =
        oracle::linear_exact_posterior(inst.spec, inst.received, inst.apriori);
    const PosteriorResult exact =
        run_exact_bcjr(inst.spec, inst.received, inst.apriori);
    worst = std::max(worst, posterior_diff(exact, lin.posterior));

    // Exponentiated forward-metric totals per depth.
    const Trellis tr = forward_recursion(inst.spec, inst.received, inst.apriori,
                                         {Algorithm::exact, 0, 0});
    for (int t = 0; t < tr.section_count(); ++t) {
      double total = kLogZero;
      for (const TrellisNode& node : tr.sections[t].nodes)
        total = log_sum(total, node.alpha);
      total += tr.alpha_shift[t];
      double lin_total = 0.0;
      for (const double a : lin.alpha[t + 1]) lin_total += a;
      worst = std::max(worst, std::abs(total - std::log(lin_total)));
    }
  }
  if (worst > tol) return fail(name, fmt("max |diff| %.3g > %.1g", worst, tol));
  return pass(name, fmt("max |diff| %.3g", worst));
}

CheckResult check_code_siso_vs_enumeration(int n_info, double tol) {
  const char* name = "code siso vs codeword enumeration";
  const ConvCodeSpec code{};
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    GaussianSampler rng(mix64(kSuiteSeed ^ (0xc0de00 + trial)));
    LlrSequence apriori(2 * (n_info + code.memory));
    for (double& l : apriori) l = -3.0 + 6.0 * rng.uniform01();
    const CodeSisoResult dec = decode_siso(code, apriori);
    const CodeSisoResult ref = oracle::enumerate_code_map(code, apriori);
    worst = std::max(worst,
                     oracle::max_abs_diff(dec.extrinsic_coded, ref.extrinsic_coded));
    worst = std::max(worst, oracle::max_abs_diff(dec.aposteriori_info,
                                                 ref.aposteriori_info));
  }
  if (worst > tol) return fail(name, fmt("max |diff| %.3g > %.1g", worst, tol));
  return pass(name, fmt("max |diff| %.3g", worst));
}

CheckResult check_encoder() {
  const char* name = "encoder";
  const ConvCodeSpec code{};
  {
    const std::vector<std::uint8_t> zeros(64, 0);
    for (const std::uint8_t b : encode(code, zeros))
      if (b != 0) return fail(name, "all-zero input must give the all-zero codeword");
  }
  // Impulse response against polynomial series division.
  {
    std::vector<std::uint8_t> impulse(40, 0);
    impulse[0] = 1;
    const std::vector<std::uint8_t> coded = encode(code, impulse);
    const std::vector<std::uint8_t> expected =
        oracle::series_parity(code, impulse, impulse.size());
    for (std::size_t t = 0; t < impulse.size(); ++t) {
      if (coded[2 * t] != impulse[t]) return fail(name, "systematic bit mismatch");
      if (coded[2 * t + 1] != expected[t])
        return fail(name, "impulse parity disagrees with series division");
    }
  }
  // Termination drives the register to zero: replay the coded systematic
  // bits through the raw register equations.
  GaussianSampler rng(kSuiteSeed ^ 0xE2C0DE);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint8_t> info(57);
    for (std::uint8_t& b : info) b = rng.raw() >> 40 & 1u;
    const std::vector<std::uint8_t> coded = encode(code, info);
    if (coded.size() != 2 * (info.size() + code.memory))
      return fail(name, "coded length mismatch");
    unsigned state = 0;
    for (std::size_t t = 0; t < info.size() + code.memory; ++t) {
      const unsigned u = coded[2 * t];
      const unsigned w =
          (u ^ static_cast<unsigned>(std::popcount(state & (code.feedback >> 1)))) & 1u;
      state = (state << 1 | w) & (static_cast<unsigned>(code.states()) - 1);
    }
    if (state != 0) return fail(name, "termination left a nonzero register");
  }
  return pass(name);
}

CheckResult check_degenerate_budgets(double tol) {
  const char* name = "degenerate budgets match exact bcjr";
  double worst = 0.0;

  // Scenario 1 trellis: K=1, S=4, 16 states.
  {
    const ChannelBlock blk = scenario1_block(kSuiteSeed ^ 0xD1, 4.0, true);
    const PosteriorResult exact =
        run_exact_bcjr(blk.spec, blk.received, blk.apriori);
    worst = std::max(worst, posterior_diff(exact,
        run_mstar_bcjr(blk.spec, blk.received, blk.apriori, 16)));
    worst = std::max(worst, posterior_diff(exact,
        run_m_bcjr(blk.spec, blk.received, blk.apriori, 16)));
    worst = std::max(worst, posterior_diff(exact,
        run_rs_bcjr(blk.spec, blk.received, blk.apriori, 4)));
  }
  // Scenario 2 trellis: K=4, S=2, 256 states (shortened block).
  {
    const ScenarioSpec sc = scenario2();
    ChannelSpec spec = make_channel(sc.taps, sc.modulation, 0.8);
    GaussianSampler rng(kSuiteSeed ^ 0xD2);
    const int n_bits = 512;
    std::vector<std::uint8_t> bits(n_bits);
    for (std::uint8_t& b : bits) b = rng.raw() >> 40 & 1u;
    const std::vector<Complex> received =
        apply_channel(spec, map_symbols(sc.modulation, bits), mix64(kSuiteSeed));
    LlrSequence apriori(n_bits);
    for (double& l : apriori) l = -3.0 + 6.0 * rng.uniform01();

    const PosteriorResult exact = run_exact_bcjr(spec, received, apriori);
    worst = std::max(worst, posterior_diff(exact,
        run_mstar_bcjr(spec, received, apriori, 256)));
    worst = std::max(worst, posterior_diff(exact,
        run_m_bcjr(spec, received, apriori, 256)));
    worst = std::max(worst, posterior_diff(exact,
        run_rs_bcjr(spec, received, apriori, 2)));
  }
  if (worst > tol) return fail(name, fmt("max |diff| %.3g > %.1g", worst, tol));
  return pass(name, fmt("max |diff| %.3g", worst));
}

CheckResult check_m_bcjr_vs_pruned_dp(int instances, double tol) {
  const char* name = "m-bcjr vs pruned dp";
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const oracle::Instance inst =
        oracle::make_random_instance(mix64(kSuiteSeed + 3000 + i), 1, 2, 6);
    for (const int m : {1, 2, 3}) {
      const PosteriorResult impl =
          run_m_bcjr(inst.spec, inst.received, inst.apriori, m);
      const PosteriorResult ref = oracle::top_m_pruned_posterior(
          inst.spec, inst.received, inst.apriori, m);
      worst = std::max(worst, posterior_diff(impl, ref));
    }
  }
  if (worst > tol) return fail(name, fmt("max |diff| %.3g > %.1g", worst, tol));
  return pass(name, fmt("max |diff| %.3g", worst));
}

CheckResult check_mstar_vs_linear_transcription(int instances, double tol) {
  const char* name = "mstar vs linear transcription";
  double worst = 0.0;
  for (int i = 0; i < instances; ++i) {
    const oracle::Instance inst =
        oracle::make_random_instance(mix64(kSuiteSeed + 4000 + i), 1, 2, 6);
    for (const int m : {1, 2, 3}) {
      const PosteriorResult impl =
          run_mstar_bcjr(inst.spec, inst.received, inst.apriori, m);
      const PosteriorResult ref = oracle::linear_mstar_posterior(
          inst.spec, inst.received, inst.apriori, m);
      worst = std::max(worst, posterior_diff(impl, ref));
    }
  }
  // A K=2 shape as well.
  for (int i = 0; i < std::max(1, instances / 4); ++i) {
    const oracle::Instance inst =
        oracle::make_random_instance(mix64(kSuiteSeed + 4500 + i), 1, 3, 5);
    const PosteriorResult impl =
        run_mstar_bcjr(inst.spec, inst.received, inst.apriori, 3);
    const PosteriorResult ref = oracle::linear_mstar_posterior(
        inst.spec, inst.received, inst.apriori, 3);
    worst = std::max(worst, posterior_diff(impl, ref));
  }
  if (worst > tol) return fail(name, fmt("max |diff| %.3g > %.1g", worst, tol));
  return pass(name, fmt("max |diff| %.3g", worst));
}

CheckResult check_flow_conservation(int blocks, double rel_tol) {
  const char* name = "flow conservation";
  double worst_rel = 0.0;
  for (int i = 0; i < blocks; ++i) {
    const ChannelBlock blk = scenario1_block(mix64(kSuiteSeed + 5000 + i), 4.0, true);
    Trellis tr = forward_recursion(blk.spec, blk.received, blk.apriori,
                                   {Algorithm::exact, 0, 0});
    backward_recursion(tr);
    const std::vector<double> flows = section_flows(tr);
    worst_rel = std::max(worst_rel, flow_spread(flows) / std::abs(flows[0]));
  }
  // The code trellis obeys the same conservation law.
  GaussianSampler rng(kSuiteSeed ^ 0xF10);
  for (int i = 0; i < blocks; ++i) {
    LlrSequence apriori(2 * (96 + 5));
    for (double& l : apriori) l = -3.0 + 6.0 * rng.uniform01();
    CodeSisoDiag diag;
    decode_siso(ConvCodeSpec{}, apriori, &diag);
    worst_rel = std::max(worst_rel,
                         flow_spread(diag.flow) / std::abs(diag.flow[0]));
  }
  if (worst_rel > rel_tol)
    return fail(name, fmt("relative spread %.3g > %.1g", worst_rel, rel_tol));
  return pass(name, fmt("relative spread %.3g", worst_rel));
}

CheckResult check_flow_negative_control() {
  const char* name = "flow conservation negative control";
  const ChannelBlock blk = scenario1_block(kSuiteSeed ^ 0xBAD, 4.0, true);
  Trellis tr = forward_recursion(blk.spec, blk.received, blk.apriori,
                                 {Algorithm::exact, 0, 0});
  // Corrupt the branch metrics of one section after the forward pass;
  // conservation must visibly break, proving the check can detect a faulty
  // combine.
  for (TrellisBranch& b : tr.sections[tr.section_count() / 2].branches)
    b.gamma += 0.01;
  backward_recursion(tr);
  const std::vector<double> flows = section_flows(tr);
  const double rel = flow_spread(flows) / std::abs(flows[0]);
  if (rel <= 1e-8)
    return fail(name, "corrupted branch metric went undetected");
  return pass(name, fmt("corruption produced relative spread %.3g", rel));
}

CheckResult check_mass_preservation(int blocks, double tol) {
  const char* name = "merge mass preservation";
  double worst = 0.0;
  for (int i = 0; i < blocks; ++i) {
    const ChannelBlock blk = scenario1_block(mix64(kSuiteSeed + 6000 + i), 4.0, true);
    for (const EqualizerConfig cfg :
         {EqualizerConfig{Algorithm::mstar, 3, 0}, EqualizerConfig{Algorithm::rs, 0, 2}}) {
      const Trellis tr = forward_recursion(blk.spec, blk.received, blk.apriori,
                                           cfg, /*diagnostics=*/true);
      for (const TrellisSection& sec : tr.sections)
        worst = std::max(worst, std::abs(sec.mass_after_reduction -
                                         sec.mass_before_reduction));
    }
  }
  if (worst > tol) return fail(name, fmt("max mass change %.3g > %.1g", worst, tol));
  return pass(name, fmt("max mass change %.3g", worst));
}

CheckResult check_branch_balance(int blocks, std::span<const int> mstar_budgets,
                                 int m_negative_budget) {
  const char* name = "branch balance";
  long long m_one_sided = 0;
  for (int i = 0; i < blocks; ++i) {
    const ChannelBlock blk = scenario1_block(mix64(kSuiteSeed + 7000 + i), 3.5, false);
    for (const int m : mstar_budgets) {
      Trellis tr = forward_recursion(blk.spec, blk.received, blk.apriori,
                                     {Algorithm::mstar, m, 0});
      backward_recursion(tr);
      if (const int n = one_sided_bits(tr); n != 0)
        return fail(name, fmt("mstar(M=%g) produced %g one-sided bits",
                              static_cast<double>(m), static_cast<double>(n)));
    }
    Trellis tr = forward_recursion(blk.spec, blk.received, blk.apriori,
                                   {Algorithm::m, m_negative_budget, 0});
    backward_recursion(tr);
    m_one_sided += one_sided_bits(tr);
  }
  if (m_one_sided == 0)
    return fail(name, "deletion-based pruning never produced a one-sided bit");
  return pass(name, fmt("m-bcjr negative control saw %.0f one-sided bits",
                        static_cast<double>(m_one_sided)));
}

CheckResult check_rs_structure() {
  const char* name = "rs survivor structure";
  const ScenarioSpec sc = scenario1();
  ChannelSpec spec = make_channel(sc.taps, sc.modulation, 1.0);
  GaussianSampler rng(kSuiteSeed ^ 0x45);
  const int n_bits = 64;
  std::vector<std::uint8_t> bits(n_bits);
  for (std::uint8_t& b : bits) b = rng.raw() >> 40 & 1u;
  const std::vector<Complex> received =
      apply_channel(spec, map_symbols(sc.modulation, bits), mix64(kSuiteSeed ^ 7));
  const LlrSequence apriori(n_bits, 0.0);

  const Trellis tr =
      forward_recursion(spec, received, apriori, {Algorithm::rs, 0, 2});
  for (int t = 2; t < tr.symbol_count; ++t)
    if (tr.sections[t].nodes.size() != 4)
      return fail(name, fmt("expected 4 survivors at depth %g", double(t)));
  // S' = S disables reduction entirely.
  const PosteriorResult exact = run_exact_bcjr(spec, received, apriori);
  const PosteriorResult rs_full = run_rs_bcjr(spec, received, apriori, 4);
  if (posterior_diff(exact, rs_full) > 1e-12)
    return fail(name, "S'=S must be bit-for-bit the exact recursion");
  return pass(name);
}

CheckResult check_mstar_branch_count() {
  const char* name = "mstar branch count";
  const ChannelBlock blk = scenario1_block(kSuiteSeed ^ 0x3C, 4.0, false);
  const Trellis tr = forward_recursion(blk.spec, blk.received, blk.apriori,
                                       {Algorithm::mstar, 2, 0});
  for (int t = 0; t < tr.section_count(); ++t) {
    const std::size_t prev =
        t == 0 ? 1 : tr.sections[t - 1].nodes.size();
    const std::size_t inputs = t < tr.symbol_count ? 2 : 1;
    if (tr.sections[t].branches.size() != prev * inputs)
      return fail(name, fmt("section %g: merging must not change branch counts",
                            static_cast<double>(t)));
    if (tr.sections[t].nodes.size() > 2)
      return fail(name, "survivor budget exceeded");
  }
  return pass(name);
}

CheckResult check_brute_force_guard() {
  const char* name = "brute force size guard";
  const oracle::Instance inst =
      oracle::make_random_instance(kSuiteSeed ^ 0x21, 1, 0, 21);
  try {
    brute_force_posterior(inst.spec, inst.received, inst.apriori);
    return fail(name, "LK=21 must be rejected");
  } catch (const std::invalid_argument&) {
  }
  // Single-symbol closed form: L = La + (||r+h||^2 - ||r-h||^2)/sigma^2.
  const oracle::Instance one =
      oracle::make_random_instance(kSuiteSeed ^ 0x22, 1, 0, 1);
  const PosteriorResult bf =
      brute_force_posterior(one.spec, one.received, one.apriori);
  const Complex h = one.spec.taps[0];
  const double expect =
      clamp_llr(one.apriori[0]) +
      (std::norm(one.received[0] + h) - std::norm(one.received[0] - h)) /
          one.spec.noise_variance;
  if (std::abs(bf.aposteriori[0] - expect) > 1e-9)
    return fail(name, "closed-form single-symbol posterior mismatch");
  return pass(name);
}

CheckResult check_interleaver() {
  const char* name = "interleaver";
  {
    const std::uint32_t id[1] = {0};
    const Permutation p = make_drp(8, id, id, 3, 0);
    const std::vector<std::uint32_t> expect{0, 3, 6, 1, 4, 7, 2, 5};
    if (p.forward != expect) return fail(name, "relative-prime map mismatch");
    const Permutation ident = make_drp(8, id, id, 1, 0);
    for (std::uint32_t i = 0; i < 8; ++i)
      if (ident.forward[i] != i) return fail(name, "identity parameters must give identity");
    try {
      make_drp(8, id, id, 2, 0);
      return fail(name, "non-coprime prime must be rejected");
    } catch (const std::invalid_argument&) {
    }
  }
  GaussianSampler rng(kSuiteSeed ^ 0x9A);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t size = 2 + rng.raw() % 255;
    const Permutation p = make_random_permutation(size, rng.raw());
    p.validate();
    std::vector<double> seq(size);
    for (double& v : seq) v = rng.next();
    const std::vector<double> back =
        deinterleave<double>(p, interleave<double>(p, seq));
    if (back != seq) return fail(name, "round trip must be exact");
  }
  for (const ScenarioSpec& sc : {scenario1(), scenario2()}) {
    const Permutation p = sc.interleaver.build(sc.coded_bits());
    p.validate();
    if (spread(p) < 2)
      return fail(name, fmt("default interleaver spread %.0f < 2",
                            static_cast<double>(spread(p))));
  }
  {
    const Permutation p = make_random_permutation(64, 5);
    std::stringstream ss;
    save_permutation(ss, p);
    const Permutation back = load_permutation(ss);
    if (back.forward != p.forward) return fail(name, "file round trip mismatch");
  }
  return pass(name);
}

CheckResult check_mapping() {
  const char* name = "symbol mapping";
  {
    const std::uint8_t bits[3] = {0, 1, 0};
    const std::vector<Complex> sy = map_symbols(Modulation::bpsk, bits);
    if (sy != std::vector<Complex>{{1, 0}, {-1, 0}, {1, 0}})
      return fail(name, "bpsk mapping mismatch");
  }
  const std::vector<Complex> pts = constellation_points(Modulation::qam16_gray);
  double energy = 0.0;
  for (const Complex& p : pts) energy += std::norm(p);
  if (std::abs(energy / 16.0 - 1.0) > 1e-12)
    return fail(name, "16qam energy not normalized");
  const double step = 2.0 / std::sqrt(10.0);
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = a + 1; b < 16; ++b) {
      if (std::abs(std::abs(pts[a] - pts[b]) - step) > 1e-9) continue;
      if (std::popcount(a ^ b) != 1)
        return fail(name, "grid neighbors must differ in exactly one bit");
    }
  }
  return pass(name);
}

CheckResult check_channel_model() {
  const char* name = "channel model";
  {
    ChannelSpec spec = make_channel({Complex{1.0}}, Modulation::bpsk, 1e-28);
    const std::vector<Complex> sy{{1, 0}, {-1, 0}, {1, 0}};
    const std::vector<Complex> out = apply_channel(spec, sy, 1);
    for (std::size_t i = 0; i < sy.size(); ++i)
      if (std::abs(out[i] - sy[i]) > 1e-12)
        return fail(name, "identity channel mismatch");
  }
  {
    ChannelSpec spec = make_channel({Complex{1.0}, Complex{1.0}},
                                    Modulation::bpsk, 1e-28);
    const std::vector<Complex> sy{{1, 0}, {-1, 0}};
    const std::vector<Complex> out = apply_channel(spec, sy, 2);
    const std::vector<Complex> expect{{1, 0}, {0, 0}, {-1, 0}};
    for (std::size_t i = 0; i < expect.size(); ++i)
      if (std::abs(out[i] - expect[i]) > 1e-12)
        return fail(name, "two-tap convolution mismatch");
  }
  // Random taps: convolution against a direct evaluation.
  GaussianSampler rng(kSuiteSeed ^ 0xCC);
  std::vector<Complex> taps(4);
  for (Complex& h : taps) h = Complex{rng.next(), rng.next()};
  taps[0] += Complex{2.0, 0.0};
  ChannelSpec spec;
  spec.taps = taps;
  spec.noise_variance = 1e-28;
  spec.bits_per_symbol = 1;
  spec.constellation = constellation_points(Modulation::bpsk);
  std::vector<Complex> sy(32);
  for (Complex& x : sy) x = Complex{rng.next(), rng.next()};
  const std::vector<Complex> out = apply_channel(spec, sy, 3);
  for (std::size_t i = 0; i < out.size(); ++i) {
    Complex direct{0.0, 0.0};
    for (std::size_t j = 0; j < taps.size(); ++j)
      if (i >= j && i - j < sy.size()) direct += taps[j] * sy[i - j];
    if (std::abs(out[i] - direct) > 1e-12)
      return fail(name, "direct convolution mismatch");
  }
  return pass(name);
}

CheckResult check_noise_calibration() {
  const char* name = "noise calibration";
  const ScenarioSpec sc = scenario1();
  const double sigma2 = noise_variance_for(0.0, sc);
  if (std::abs(sigma2 - 1024.0 / 1014.0) > 1e-12)
    return fail(name, fmt("scenario-1 sigma^2 at 0 dB: %.9f", sigma2));

  ScenarioSpec doubled = sc;
  for (Complex& h : doubled.taps) h *= std::sqrt(2.0);
  if (std::abs(noise_variance_for(0.0, doubled) - 2.0 * sigma2) > 1e-12)
    return fail(name, "sigma^2 must scale linearly with channel gain");
  if (std::abs(noise_variance_for(3.0102999566398120, sc) - sigma2 / 2.0) > 1e-6)
    return fail(name, "+3.0103 dB must halve sigma^2");

  // Sample moment of the injected noise.
  ChannelSpec spec = make_channel({Complex{1.0}}, Modulation::bpsk, 0.7);
  const std::vector<Complex> zeros(1000000, Complex{0.0, 0.0});
  const std::vector<Complex> out = apply_channel(spec, zeros, 42);
  double moment = 0.0;
  for (const Complex& y : out) moment += std::norm(y);
  moment /= static_cast<double>(out.size());
  if (std::abs(moment / 0.7 - 1.0) > 0.01)
    return fail(name, fmt("empirical noise variance off by %.3g%%",
                          100.0 * std::abs(moment / 0.7 - 1.0)));
  return pass(name, fmt("noise moment within %.3g%%",
                        100.0 * std::abs(moment / 0.7 - 1.0)));
}

CheckResult check_noiseless_loopback(int blocks) {
  const char* name = "noiseless loopback";
  const TurboSystem sys = make_turbo_system(scenario1());
  GaussianSampler rng(kSuiteSeed ^ 0x100B);
  for (int i = 0; i < blocks; ++i) {
    const IterationTrace trace =
        simulate_block(sys, {Algorithm::exact, 0, 0}, 1e-4, rng.raw());
    if (trace.front().bit_errors != 0)
      return fail(name, "noiseless block decoded with errors");
  }
  // Shortened 16QAM variant.
  ScenarioSpec sc2 = scenario2();
  sc2.info_bits = 123;  // coded 256, 64 symbols
  sc2.interleaver.kind = InterleaverSpec::Kind::random;
  sc2.interleaver.seed = 3;
  const TurboSystem sys2 = make_turbo_system(sc2);
  for (int i = 0; i < std::max(1, blocks / 10); ++i) {
    const IterationTrace trace =
        simulate_block(sys2, {Algorithm::exact, 0, 0}, 1e-4, rng.raw());
    if (trace.front().bit_errors != 0)
      return fail(name, "noiseless 16qam block decoded with errors");
  }
  return pass(name);
}

CheckResult check_turbo_determinism() {
  const char* name = "turbo loop determinism";
  const TurboSystem sys = make_turbo_system(tiny_scenario());
  const double sigma2 = noise_variance_for(3.0, sys.scenario);

  const IterationTrace a = simulate_block(sys, {Algorithm::mstar, 2, 0}, sigma2, 77);
  const IterationTrace b = simulate_block(sys, {Algorithm::mstar, 2, 0}, sigma2, 77);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].bit_errors != b[i].bit_errors ||
        a[i].mean_abs_extrinsic != b[i].mean_abs_extrinsic)
      return fail(name, "identical seeds must give identical traces");

  // Full-budget mstar is the exact recursion inside the loop as well.
  const IterationTrace exact = simulate_block(sys, {Algorithm::exact, 0, 0}, sigma2, 78);
  const IterationTrace full = simulate_block(sys, {Algorithm::mstar, 2, 0}, sigma2, 78);
  for (std::size_t i = 0; i < exact.size(); ++i)
    if (exact[i].bit_errors != full[i].bit_errors)
      return fail(name, "full-budget mstar must match exact in the loop");

  // Extrinsic-only passing: a flat prior is not mutated between calls.
  const ChannelBlock blk = scenario1_block(kSuiteSeed ^ 0xEE, 4.0, false);
  const PosteriorResult once = run_exact_bcjr(blk.spec, blk.received, blk.apriori);
  const PosteriorResult twice = run_exact_bcjr(blk.spec, blk.received, blk.apriori);
  if (once.extrinsic != twice.extrinsic)
    return fail(name, "equalizer must be pure in its inputs");
  return pass(name);
}

CheckResult check_sweep_determinism() {
  const char* name = "sweep determinism and csv";
  SweepConfig cfg;
  cfg.scenario = tiny_scenario();
  cfg.equalizers = {{Algorithm::mstar, 2, 0}, {Algorithm::rs, 0, 1}};
  cfg.ebno_db = {2.0, 4.0};
  cfg.min_errors = 0;
  cfg.max_blocks = 3;
  cfg.allow_low_confidence = true;
  cfg.seed = 1234;

  const std::vector<BerRecord> a = run_sweep(cfg);
  cfg.threads = 2;
  const std::vector<BerRecord> b = run_sweep(cfg);
  if (a != b) return fail(name, "records must not depend on the thread count");

  std::stringstream s1, s2;
  write_ber_csv(s1, a);
  write_ber_csv(s2, b);
  if (s1.str() != s2.str()) return fail(name, "same seed must give identical csv");
  const std::vector<BerRecord> parsed = read_ber_csv(s1);
  if (parsed != a) return fail(name, "csv round trip mismatch");
  for (const BerRecord& r : a)
    if (r.bit_errors > r.bits) return fail(name, "errors exceed simulated bits");
  return pass(name);
}

CheckList run_verification_suite() {
  CheckList results;
  results.push_back(check_log_domain());
  results.push_back(check_state_ops());
  results.push_back(check_branch_metric());
  results.push_back(check_exact_vs_brute_force(100, 1e-9));
  results.push_back(check_exact_vs_linear_dp(25, 1e-9));
  results.push_back(check_code_siso_vs_enumeration(8, 1e-9));
  results.push_back(check_encoder());
  results.push_back(check_degenerate_budgets(1e-9));
  results.push_back(check_m_bcjr_vs_pruned_dp(25, 1e-9));
  results.push_back(check_mstar_vs_linear_transcription(25, 1e-9));
  results.push_back(check_flow_conservation(20, 1e-8));
  results.push_back(check_flow_negative_control());
  results.push_back(check_mass_preservation(20, 1e-10));
  const int budgets[] = {2, 3, 4};
  results.push_back(check_branch_balance(60, budgets, 2));
  results.push_back(check_rs_structure());
  results.push_back(check_mstar_branch_count());
  results.push_back(check_brute_force_guard());
  results.push_back(check_interleaver());
  results.push_back(check_mapping());
  results.push_back(check_channel_model());
  results.push_back(check_noise_calibration());
  results.push_back(check_noiseless_loopback(100));
  results.push_back(check_turbo_determinism());
  results.push_back(check_sweep_determinism());
  return results;
}

bool all_passed(const CheckList& results) {
  for (const CheckResult& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace tq::verify
