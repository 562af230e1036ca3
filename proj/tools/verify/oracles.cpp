#include "verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tq/link.hpp"
#include "tq/rng.hpp"

namespace tq::oracle {

namespace {

// Linear-domain branch metric, written out literally: product of bit priors
// times the Gaussian factor, with the empty symbol x = 0 outside the block.
double linear_gamma(const ChannelSpec& spec, std::span<const Complex> received,
                    std::span<const double> la, int time, StateIndex state,
                    std::uint32_t input, int symbols) {
  const int k = spec.bits_per_symbol;
  const int s = spec.memory();
  double prob = 1.0;
  if (time <= symbols) {
    for (int b = 0; b < k; ++b) {
      const int bit = input >> (k - 1 - b) & 1u;
      const double l = la[static_cast<std::size_t>(time - 1) * k + b];
      prob *= bit == 0 ? std::exp(l) / (1.0 + std::exp(l))
                       : 1.0 / (1.0 + std::exp(l));
    }
  }
  Complex f{0.0, 0.0};
  if (time <= symbols) f += spec.taps[0] * spec.constellation[input];
  for (int j = 1; j <= s; ++j) {
    const int src = time - j;
    if (src < 1 || src > symbols) continue;
    f += spec.taps[j] *
         spec.constellation[state >> ((j - 1) * k) & ((1u << k) - 1)];
  }
  return prob * std::exp(-std::norm(received[time - 1] - f) / spec.noise_variance);
}

}  // namespace

LinearExactResult linear_exact_posterior(const ChannelSpec& spec,
                                         std::span<const Complex> received,
                                         std::span<const double> apriori) {
  const int k = spec.bits_per_symbol;
  const int s = spec.memory();
  const int symbols = static_cast<int>(apriori.size()) / k;
  const int sections = symbols + s;
  const std::uint32_t n_states = state_count(k, s);
  const LlrSequence la = clamp_llrs(apriori);

  LinearExactResult result;
  result.alpha.assign(sections + 1, std::vector<double>(n_states, 0.0));
  result.alpha[0][0] = 1.0;

  // Forward.
  for (int i = 1; i <= sections; ++i) {
    const std::uint32_t inputs = i <= symbols ? 1u << k : 1u;
    for (std::uint32_t st = 0; st < n_states; ++st) {
      const double a = result.alpha[i - 1][st];
      if (a == 0.0) continue;
      for (std::uint32_t u = 0; u < inputs; ++u) {
        const double g = linear_gamma(spec, received, la, i, st, u, symbols);
        result.alpha[i][successor_state(st, u, k, s)] += a * g;
      }
    }
  }
  for (std::uint32_t st = 0; st < n_states; ++st)
    result.total += result.alpha[sections][st];

  // Backward.
  std::vector<std::vector<double>> beta(sections + 1,
                                        std::vector<double>(n_states, 0.0));
  std::fill(beta[sections].begin(), beta[sections].end(), 1.0);
  for (int i = sections; i >= 1; --i) {
    const std::uint32_t inputs = i <= symbols ? 1u << k : 1u;
    for (std::uint32_t st = 0; st < n_states; ++st) {
      double acc = 0.0;
      for (std::uint32_t u = 0; u < inputs; ++u) {
        const double g = linear_gamma(spec, received, la, i, st, u, symbols);
        acc += g * beta[i][successor_state(st, u, k, s)];
      }
      beta[i - 1][st] = acc;
    }
  }

  // Completion.
  result.posterior.aposteriori.resize(la.size());
  result.posterior.extrinsic.resize(la.size());
  for (int i = 1; i <= symbols; ++i) {
    std::vector<double> pos(k, 0.0), neg(k, 0.0);
    for (std::uint32_t st = 0; st < n_states; ++st) {
      const double a = result.alpha[i - 1][st];
      if (a == 0.0) continue;
      for (std::uint32_t u = 0; u < (1u << k); ++u) {
        const double g = linear_gamma(spec, received, la, i, st, u, symbols);
        const double v = a * g * beta[i][successor_state(st, u, k, s)];
        for (int b = 0; b < k; ++b) {
          if (u >> (k - 1 - b) & 1u)
            neg[b] += v;
          else
            pos[b] += v;
        }
      }
    }
    for (int b = 0; b < k; ++b) {
      const std::size_t j = static_cast<std::size_t>(i - 1) * k + b;
      result.posterior.aposteriori[j] = std::log(pos[b]) - std::log(neg[b]);
      result.posterior.extrinsic[j] = result.posterior.aposteriori[j] - la[j];
    }
  }
  return result;
}

namespace {

struct LinState {
  StateIndex state;
  double alpha;
};

struct LinBranch {
  StateIndex origin;
  std::uint32_t input;
  StateIndex target;  // redirected on merge
  double gamma;
};

struct LinSection {
  std::vector<LinState> states;
  std::vector<LinBranch> branches;
};

bool lin_better(const LinState& a, const LinState& b) {
  if (a.alpha != b.alpha) return a.alpha > b.alpha;
  return a.state < b.state;
}

PosteriorResult lin_complete(const ChannelSpec& spec,
                             std::span<const double> la,
                             const std::vector<LinSection>& sections,
                             int symbols) {
  const int k = spec.bits_per_symbol;
  const int n_sections = static_cast<int>(sections.size());

  // Backward pass over surviving states and visited branches only.
  std::vector<std::vector<double>> beta(n_sections + 1);
  beta[n_sections].assign(sections[n_sections - 1].states.size(), 1.0);
  for (int i = n_sections; i >= 1; --i) {
    const std::vector<LinState>& prev_states =
        i >= 2 ? sections[i - 2].states : std::vector<LinState>{{0, 1.0}};
    beta[i - 1].assign(prev_states.size(), 0.0);
    const LinSection& sec = sections[i - 1];
    for (const LinBranch& b : sec.branches) {
      std::size_t origin_slot = 0, target_slot = 0;
      for (std::size_t q = 0; q < prev_states.size(); ++q)
        if (prev_states[q].state == b.origin) origin_slot = q;
      for (std::size_t q = 0; q < sec.states.size(); ++q)
        if (sec.states[q].state == b.target) target_slot = q;
      beta[i - 1][origin_slot] += b.gamma * beta[i][target_slot];
    }
  }

  PosteriorResult out;
  out.aposteriori.resize(la.size());
  out.extrinsic.resize(la.size());
  for (int i = 1; i <= symbols; ++i) {
    const LinSection& sec = sections[i - 1];
    const std::vector<LinState>& prev_states =
        i >= 2 ? sections[i - 2].states : std::vector<LinState>{{0, 1.0}};
    std::vector<double> pos(k, 0.0), neg(k, 0.0);
    for (const LinBranch& b : sec.branches) {
      std::size_t origin_slot = 0, target_slot = 0;
      for (std::size_t q = 0; q < prev_states.size(); ++q)
        if (prev_states[q].state == b.origin) origin_slot = q;
      for (std::size_t q = 0; q < sec.states.size(); ++q)
        if (sec.states[q].state == b.target) target_slot = q;
      const double v =
          prev_states[origin_slot].alpha * b.gamma * beta[i][target_slot];
      for (int bl = 0; bl < k; ++bl) {
        if (b.input >> (k - 1 - bl) & 1u)
          neg[bl] += v;
        else
          pos[bl] += v;
      }
    }
    for (int bl = 0; bl < k; ++bl) {
      const std::size_t j = static_cast<std::size_t>(i - 1) * k + bl;
      double llr;
      if (pos[bl] == 0.0 && neg[bl] == 0.0)
        llr = 0.0;
      else if (pos[bl] == 0.0)
        llr = -kLlrClamp;
      else if (neg[bl] == 0.0)
        llr = kLlrClamp;
      else
        llr = std::log(pos[bl]) - std::log(neg[bl]);
      out.aposteriori[j] = llr;
      out.extrinsic[j] = llr - la[j];
    }
  }
  return out;
}

}  // namespace

PosteriorResult linear_mstar_posterior(const ChannelSpec& spec,
                                       std::span<const Complex> received,
                                       std::span<const double> apriori,
                                       int state_budget) {
  const int k = spec.bits_per_symbol;
  const int s = spec.memory();
  const int symbols = static_cast<int>(apriori.size()) / k;
  const int n_sections = symbols + s;
  const LlrSequence la = clamp_llrs(apriori);
  const auto m_budget = static_cast<std::size_t>(state_budget);

  std::vector<LinSection> sections(n_sections);
  std::vector<LinState> current{{0, 1.0}};

  for (int i = 1; i <= n_sections; ++i) {
    LinSection& sec = sections[i - 1];
    const std::uint32_t inputs = i <= symbols ? 1u << k : 1u;

    // Expand every branch from the surviving states, accumulate alphas.
    std::vector<LinState> next;
    for (const LinState& st : current) {
      for (std::uint32_t u = 0; u < inputs; ++u) {
        const double g = linear_gamma(spec, received, la, i, st.state, u, symbols);
        const StateIndex tgt = successor_state(st.state, u, k, s);
        sec.branches.push_back({st.state, u, tgt, g});
        bool found = false;
        for (LinState& cand : next) {
          if (cand.state == tgt) {
            cand.alpha += st.alpha * g;
            found = true;
            break;
          }
        }
        if (!found) next.push_back({tgt, st.alpha * g});
      }
    }

    if (next.size() > m_budget) {
      std::sort(next.begin(), next.end(), lin_better);
      std::vector<LinState> survivors(next.begin(), next.begin() + m_budget);
      std::vector<LinState> excess(next.begin() + m_budget, next.end());
      std::vector<double> snapshot(survivors.size());
      for (std::size_t v = 0; v < survivors.size(); ++v)
        snapshot[v] = survivors[v].alpha;
      // Excess states, largest alpha first: redirect their branches into the
      // closest survivor and fold their mass in.
      for (const LinState& exc : excess) {
        std::size_t best = 0;
        int best_dist = state_distance(exc.state, survivors[0].state, k, s);
        for (std::size_t v = 1; v < survivors.size(); ++v) {
          const int dist = state_distance(exc.state, survivors[v].state, k, s);
          if (dist < best_dist ||
              (dist == best_dist &&
               (snapshot[v] > snapshot[best] ||
                (snapshot[v] == snapshot[best] &&
                 survivors[v].state < survivors[best].state)))) {
            best = v;
            best_dist = dist;
          }
        }
        for (LinBranch& b : sec.branches)
          if (b.target == exc.state) b.target = survivors[best].state;
        survivors[best].alpha += exc.alpha;
      }
      next = std::move(survivors);
    }
    std::sort(next.begin(), next.end(),
              [](const LinState& a, const LinState& b) { return a.state < b.state; });
    sec.states = next;
    current = std::move(next);
  }

  return lin_complete(spec, la, sections, symbols);
}

PosteriorResult top_m_pruned_posterior(const ChannelSpec& spec,
                                       std::span<const Complex> received,
                                       std::span<const double> apriori,
                                       int state_budget) {
  const int k = spec.bits_per_symbol;
  const int s = spec.memory();
  const int symbols = static_cast<int>(apriori.size()) / k;
  const int n_sections = symbols + s;
  const LlrSequence la = clamp_llrs(apriori);
  const auto m_budget = static_cast<std::size_t>(state_budget);

  std::vector<LinSection> sections(n_sections);
  std::vector<LinState> current{{0, 1.0}};

  for (int i = 1; i <= n_sections; ++i) {
    LinSection& sec = sections[i - 1];
    const std::uint32_t inputs = i <= symbols ? 1u << k : 1u;
    std::vector<LinState> next;
    for (const LinState& st : current) {
      for (std::uint32_t u = 0; u < inputs; ++u) {
        const double g = linear_gamma(spec, received, la, i, st.state, u, symbols);
        const StateIndex tgt = successor_state(st.state, u, k, s);
        sec.branches.push_back({st.state, u, tgt, g});
        bool found = false;
        for (LinState& cand : next) {
          if (cand.state == tgt) {
            cand.alpha += st.alpha * g;
            found = true;
            break;
          }
        }
        if (!found) next.push_back({tgt, st.alpha * g});
      }
    }
    if (next.size() > m_budget) {
      std::sort(next.begin(), next.end(), lin_better);
      next.resize(m_budget);
      // Deleted states take their incoming branches with them.
      std::erase_if(sec.branches, [&](const LinBranch& b) {
        for (const LinState& st : next)
          if (st.state == b.target) return false;
        return true;
      });
    }
    std::sort(next.begin(), next.end(),
              [](const LinState& a, const LinState& b) { return a.state < b.state; });
    sec.states = next;
    current = std::move(next);
  }

  return lin_complete(spec, la, sections, symbols);
}

CodeSisoResult enumerate_code_map(const ConvCodeSpec& spec,
                                  std::span<const double> apriori_coded) {
  const int steps = static_cast<int>(apriori_coded.size() / 2);
  const int n_info = steps - spec.memory;
  if (n_info < 1 || n_info > 20)
    throw std::invalid_argument("enumerate_code_map: info length out of range");
  const LlrSequence la = clamp_llrs(apriori_coded);
  const int n_coded = 2 * steps;

  std::vector<double> pos_coded(n_coded, kLogZero), neg_coded(n_coded, kLogZero);
  std::vector<double> pos_info(n_info, kLogZero), neg_info(n_info, kLogZero);

  std::vector<std::uint8_t> info(n_info);
  for (std::uint64_t word = 0; word < (std::uint64_t{1} << n_info); ++word) {
    for (int i = 0; i < n_info; ++i)
      info[i] = static_cast<std::uint8_t>(word >> i & 1u);
    const std::vector<std::uint8_t> coded = encode(spec, info);
    double lambda = 0.0;
    for (int j = 0; j < n_coded; ++j)
      lambda += prior_from_llr(la[j], coded[j] == 0 ? +1 : -1);
    for (int j = 0; j < n_coded; ++j) {
      if (coded[j])
        neg_coded[j] = log_sum(neg_coded[j], lambda);
      else
        pos_coded[j] = log_sum(pos_coded[j], lambda);
    }
    for (int i = 0; i < n_info; ++i) {
      if (info[i])
        neg_info[i] = log_sum(neg_info[i], lambda);
      else
        pos_info[i] = log_sum(pos_info[i], lambda);
    }
  }

  CodeSisoResult out;
  out.extrinsic_coded.resize(n_coded);
  out.aposteriori_info.resize(n_info);
  for (int j = 0; j < n_coded; ++j)
    out.extrinsic_coded[j] = pos_coded[j] - neg_coded[j] - la[j];
  for (int i = 0; i < n_info; ++i)
    out.aposteriori_info[i] = pos_info[i] - neg_info[i];
  return out;
}

std::vector<std::uint8_t> series_parity(const ConvCodeSpec& spec,
                                        std::span<const std::uint8_t> info,
                                        std::size_t n) {
  // q = info / feedback as a power series (long division, f_0 = 1), then
  // p = feedforward * q.
  std::vector<std::uint8_t> q(n, 0), p(n, 0);
  for (std::size_t t = 0; t < n; ++t) {
    int acc = t < info.size() ? info[t] & 1 : 0;
    for (int j = 1; j <= spec.memory; ++j)
      if (spec.feedback >> j & 1u && t >= static_cast<std::size_t>(j))
        acc ^= q[t - j];
    q[t] = static_cast<std::uint8_t>(acc);
  }
  for (std::size_t t = 0; t < n; ++t) {
    int acc = 0;
    for (int j = 0; j <= spec.memory; ++j)
      if (spec.feedforward >> j & 1u && t >= static_cast<std::size_t>(j))
        acc ^= q[t - j];
    p[t] = static_cast<std::uint8_t>(acc);
  }
  return p;
}

Instance make_random_instance(std::uint64_t seed, int k, int s, int symbols) {
  GaussianSampler rng(seed);

  Instance inst;
  inst.spec.bits_per_symbol = k;
  inst.spec.constellation =
      constellation_points(k == 1 ? Modulation::bpsk : Modulation::qam16_gray);
  inst.spec.taps.resize(s + 1);
  double gain = 0.0;
  do {
    for (int j = 0; j <= s; ++j) {
      inst.spec.taps[j] = Complex{rng.next(), 0.0};
    }
  } while (std::abs(inst.spec.taps[0]) < 0.2);
  for (const Complex& h : inst.spec.taps) gain += std::norm(h);
  for (Complex& h : inst.spec.taps) h /= std::sqrt(gain);
  inst.spec.noise_variance = 0.3 + 1.7 * rng.uniform01();

  inst.apriori.resize(static_cast<std::size_t>(symbols) * k);
  for (double& l : inst.apriori) l = -3.0 + 6.0 * rng.uniform01();

  std::vector<std::uint8_t> bits(inst.apriori.size());
  for (std::uint8_t& b : bits) b = rng.raw() >> 40 & 1u;
  const std::vector<Complex> tx = map_symbols(
      k == 1 ? Modulation::bpsk : Modulation::qam16_gray, bits);
  inst.received = apply_channel(inst.spec, tx, mix64(seed ^ 0xabcdef12345ULL));
  return inst;
}

double linear_branch_metric(const ChannelSpec& spec,
                            std::span<const Complex> received,
                            std::span<const double> clamped_apriori, int time,
                            StateIndex state, std::uint32_t input, int symbols) {
  return linear_gamma(spec, received, clamped_apriori, time, state, input,
                      symbols);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = a.size() == b.size() ? 0.0 : 1e300;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace tq::oracle
