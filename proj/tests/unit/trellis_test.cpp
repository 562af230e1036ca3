#include <doctest.h>

#include <cmath>
#include <vector>

#include "tq/trellis.hpp"
#include "verify/oracles.hpp"

using namespace tq;

TEST_CASE("successor_state shifts the newest tuple in") {
  CHECK(successor_state(0, 0, 1, 2) == 0);
  // K=1, S=2: history (a_{i-1}=1, a_{i-2}=0), input 1 -> (1, 1).
  CHECK(successor_state(0b01, 1, 1, 2) == 0b11);
  CHECK(successor_state(0b11, 0, 1, 2) == 0b10);
  // S=0 collapses to the single state.
  CHECK(successor_state(0, 1, 1, 0) == 0);
}

TEST_CASE("successor_state is 2^K-regular for K=2, S=2") {
  std::vector<int> hits(16, 0);
  for (StateIndex s = 0; s < 16; ++s)
    for (std::uint32_t u = 0; u < 4; ++u) ++hits[successor_state(s, u, 2, 2)];
  for (const int h : hits) CHECK(h == 4);
}

TEST_CASE("state_distance counts trailing-tuple disagreement") {
  CHECK(state_distance(9, 9, 1, 4) == 0);
  CHECK(state_distance(0b0001, 0b1001, 1, 4) == 1);
  CHECK(state_distance(0b0100, 0b0111, 2, 2) == 2);
  CHECK(state_distance(0b01, 0b10, 1, 2) == 2);
  CHECK(state_distance(0, 0, 4, 0) == 0);
}

TEST_CASE("branch_metric zero-residual and unit-residual values") {
  ChannelSpec spec = make_channel({Complex{0.7}, Complex{0.5}},
                                  Modulation::bpsk, 0.4);
  const StateIndex history = 0;  // previous amplitude +1
  const Complex noiseless = spec.taps[0] * spec.constellation[1] +
                            spec.taps[1] * spec.constellation[0];
  const double flat[1] = {prior_from_llr(0.0, -1)};
  CHECK(branch_metric(spec, noiseless, history, 1, flat) ==
        doctest::Approx(-0.69314718055994531).epsilon(1e-12));
  const Complex off = noiseless + Complex{0.0, std::sqrt(spec.noise_variance)};
  CHECK(branch_metric(spec, off, history, 1, flat) ==
        doctest::Approx(-1.69314718055994531).epsilon(1e-12));
}

TEST_CASE("branch_metric rejects a non-positive noise variance") {
  ChannelSpec spec = make_channel({Complex{1.0}}, Modulation::bpsk, 1.0);
  spec.noise_variance = 0.0;
  const double flat[1] = {prior_from_llr(0.0, +1)};
  CHECK_THROWS_AS(branch_metric(spec, Complex{0.1, 0.0}, 0, 0, flat),
                  std::invalid_argument);
}

TEST_CASE("branch_metric agrees with the literal linear-domain product") {
  for (int trial = 0; trial < 10; ++trial) {
    const oracle::Instance inst = oracle::make_random_instance(900 + trial, 1, 2, 6);
    const LlrSequence la = clamp_llrs(inst.apriori);
    for (StateIndex state = 0; state < 4; ++state) {
      for (std::uint32_t input = 0; input < 2; ++input) {
        const int time = 4;  // all taps inside the block
        const double priors[1] = {
            prior_from_llr(la[time - 1], input == 0 ? +1 : -1)};
        const double impl = branch_metric(inst.spec, inst.received[time - 1],
                                          state, input, priors);
        const double lit = std::log(oracle::linear_branch_metric(
            inst.spec, inst.received, la, time, state, input, 6));
        CHECK(impl == doctest::Approx(lit).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("metric differences ignore the dropped Gaussian prefactor") {
  const oracle::Instance inst = oracle::make_random_instance(77, 1, 2, 6);
  const LlrSequence la = clamp_llrs(inst.apriori);
  const double constant =
      -0.5 * std::log(2.0 * 3.14159265358979323846 * inst.spec.noise_variance);
  const int time = 3;
  double impl[2], lit[2];
  for (std::uint32_t u = 0; u < 2; ++u) {
    const double priors[1] = {prior_from_llr(la[time - 1], u == 0 ? +1 : -1)};
    impl[u] = branch_metric(inst.spec, inst.received[time - 1], 2, u, priors);
    lit[u] = std::log(oracle::linear_branch_metric(inst.spec, inst.received, la,
                                                   time, 2, u, 6)) +
             constant;
  }
  CHECK(impl[0] - impl[1] == doctest::Approx(lit[0] - lit[1]).epsilon(1e-10));
}

TEST_CASE("tail slots contribute the zero symbol, not a constellation point") {
  ChannelSpec spec = make_channel({Complex{1.0}, Complex{1.0}},
                                  Modulation::bpsk, 1.0);
  // valid_taps excludes tap 1: the history symbol is outside the block.
  const double g_masked =
      branch_metric(spec, Complex{1.0, 0.0}, 0, 0, {}, 0b01);
  // Residual is r - h_0 * (+1) = 0 exactly when the tap is masked out.
  CHECK(g_masked == doctest::Approx(0.0).epsilon(1e-12));
  const double g_full = branch_metric(spec, Complex{1.0, 0.0}, 0, 0, {});
  CHECK(g_full == doctest::Approx(-1.0).epsilon(1e-12));
}
