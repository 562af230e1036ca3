#include "tq/conv_code.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace tq {

void ConvCodeSpec::validate() const {
  if (memory < 1 || memory > 16)
    throw std::invalid_argument("code: memory out of range");
  const unsigned max_mask = (1u << (memory + 1)) - 1;
  if (feedback == 0 || feedback > max_mask)
    throw std::invalid_argument("code: feedback degree exceeds memory");
  if ((feedback & 1u) == 0)
    throw std::invalid_argument("code: feedback constant term must be 1");
  if (feedforward == 0 || feedforward > max_mask)
    throw std::invalid_argument("code: feedforward degree exceeds memory");
}

namespace {

inline int parity(unsigned x) { return std::popcount(x) & 1; }

// Feedback sum over the register taps x^1..x^memory.
inline int state_feedback(const ConvCodeSpec& spec, unsigned state) {
  return parity(state & (spec.feedback >> 1));
}

// Parity output for register input w: g_0 w + sum_j g_j s_j.
inline int parity_out(const ConvCodeSpec& spec, unsigned state, int w) {
  return parity(state & (spec.feedforward >> 1)) ^ (static_cast<int>(spec.feedforward & 1u) & w);
}

}  // namespace

std::vector<std::uint8_t> encode(const ConvCodeSpec& spec,
                                 std::span<const std::uint8_t> info) {
  spec.validate();
  const unsigned mask = static_cast<unsigned>(spec.states()) - 1;
  std::vector<std::uint8_t> out;
  out.reserve(2 * (info.size() + spec.memory));
  unsigned state = 0;
  for (const std::uint8_t u_in : info) {
    const int u = u_in & 1;
    const int w = u ^ state_feedback(spec, state);
    out.push_back(static_cast<std::uint8_t>(u));
    out.push_back(static_cast<std::uint8_t>(parity_out(spec, state, w)));
    state = (state << 1 | static_cast<unsigned>(w)) & mask;
  }
  // Termination: the input that zeroes the register feed drives the state to
  // zero within `memory` steps; tail bits are transmitted like any others.
  for (int t = 0; t < spec.memory; ++t) {
    const int u = state_feedback(spec, state);
    out.push_back(static_cast<std::uint8_t>(u));
    out.push_back(static_cast<std::uint8_t>(parity_out(spec, state, 0)));
    state = (state << 1) & mask;
  }
  return out;
}

CodeSisoResult decode_siso(const ConvCodeSpec& spec,
                           std::span<const double> apriori_coded,
                           CodeSisoDiag* diag) {
  spec.validate();
  if (apriori_coded.size() % 2 != 0)
    throw std::invalid_argument("decode_siso: coded length must be even");
  const int steps = static_cast<int>(apriori_coded.size() / 2);
  const int info_steps = steps - spec.memory;
  if (info_steps < 1)
    throw std::invalid_argument("decode_siso: block shorter than the termination tail");

  const int n_states = spec.states();
  const unsigned mask = static_cast<unsigned>(n_states) - 1;
  const LlrSequence la = clamp_llrs(apriori_coded);

  // Static transition structure.
  std::vector<int> next(n_states * 2), par(n_states * 2), fb(n_states);
  for (int s = 0; s < n_states; ++s) {
    fb[s] = state_feedback(spec, static_cast<unsigned>(s));
    for (int u = 0; u < 2; ++u) {
      const int w = u ^ fb[s];
      next[s * 2 + u] = static_cast<int>((static_cast<unsigned>(s) << 1 | static_cast<unsigned>(w)) & mask);
      par[s * 2 + u] = parity_out(spec, static_cast<unsigned>(s), w);
    }
  }

  // Per-position priors for both bit values.
  std::vector<double> prior(2 * steps * 2);
  for (int j = 0; j < 2 * steps; ++j) {
    prior[j * 2 + 0] = prior_from_llr(la[j], +1);
    prior[j * 2 + 1] = prior_from_llr(la[j], -1);
  }
  const auto gamma = [&](int t, int sys, int p) {
    return prior[(2 * t) * 2 + sys] + prior[(2 * t + 1) * 2 + p];
  };

  // Forward, with per-step normalization.
  std::vector<double> alpha(static_cast<std::size_t>(steps + 1) * n_states, kLogZero);
  std::vector<double> alpha_shift(steps + 1, 0.0);
  alpha[0] = 0.0;  // encoder starts in state 0
  for (int t = 0; t < steps; ++t) {
    const double* a = &alpha[static_cast<std::size_t>(t) * n_states];
    double* a_next = &alpha[static_cast<std::size_t>(t + 1) * n_states];
    const bool tail = t >= info_steps;
    for (int s = 0; s < n_states; ++s) {
      if (a[s] == kLogZero) continue;
      const int u_lo = tail ? fb[s] : 0;
      const int u_hi = tail ? fb[s] : 1;
      for (int u = u_lo; u <= u_hi; ++u) {
        const double v = a[s] + gamma(t, u, par[s * 2 + u]);
        double& slot = a_next[next[s * 2 + u]];
        slot = log_sum(slot, v);
      }
    }
    double shift = kLogZero;
    for (int s = 0; s < n_states; ++s) shift = std::max(shift, a_next[s]);
    for (int s = 0; s < n_states; ++s)
      if (a_next[s] != kLogZero) a_next[s] -= shift;
    alpha_shift[t + 1] = alpha_shift[t] + shift;
  }

  // Backward from the terminated state.
  std::vector<double> beta(static_cast<std::size_t>(steps + 1) * n_states, kLogZero);
  std::vector<double> beta_shift(steps + 1, 0.0);
  beta[static_cast<std::size_t>(steps) * n_states] = 0.0;
  for (int t = steps - 1; t >= 0; --t) {
    const double* b_next = &beta[static_cast<std::size_t>(t + 1) * n_states];
    double* b = &beta[static_cast<std::size_t>(t) * n_states];
    const bool tail = t >= info_steps;
    for (int s = 0; s < n_states; ++s) {
      const int u_lo = tail ? fb[s] : 0;
      const int u_hi = tail ? fb[s] : 1;
      double acc = kLogZero;
      for (int u = u_lo; u <= u_hi; ++u) {
        const double v = gamma(t, u, par[s * 2 + u]) + b_next[next[s * 2 + u]];
        acc = log_sum(acc, v);
      }
      b[s] = acc;
    }
    double shift = kLogZero;
    for (int s = 0; s < n_states; ++s) shift = std::max(shift, b[s]);
    for (int s = 0; s < n_states; ++s)
      if (b[s] != kLogZero) b[s] -= shift;
    beta_shift[t] = beta_shift[t + 1] + shift;
  }

  CodeSisoResult result;
  result.extrinsic_coded.resize(2 * steps);
  result.aposteriori_info.resize(info_steps);
  if (diag) diag->flow.assign(steps, 0.0);

  for (int t = 0; t < steps; ++t) {
    const double* a = &alpha[static_cast<std::size_t>(t) * n_states];
    const double* b_next = &beta[static_cast<std::size_t>(t + 1) * n_states];
    const bool tail = t >= info_steps;
    double sys_val[2] = {kLogZero, kLogZero};
    double par_val[2] = {kLogZero, kLogZero};
    double flow = kLogZero;
    for (int s = 0; s < n_states; ++s) {
      if (a[s] == kLogZero) continue;
      const int u_lo = tail ? fb[s] : 0;
      const int u_hi = tail ? fb[s] : 1;
      for (int u = u_lo; u <= u_hi; ++u) {
        const int p = par[s * 2 + u];
        const double v = a[s] + gamma(t, u, p) + b_next[next[s * 2 + u]];
        sys_val[u] = log_sum(sys_val[u], v);
        par_val[p] = log_sum(par_val[p], v);
        if (diag) flow = log_sum(flow, v);
      }
    }
    const auto to_llr = [](const double val[2]) {
      if (val[0] == kLogZero && val[1] == kLogZero) return 0.0;
      if (val[0] == kLogZero) return -kLlrClamp;
      if (val[1] == kLogZero) return kLlrClamp;
      return val[0] - val[1];  // bit 0 carries amplitude +1
    };
    const double l_sys = to_llr(sys_val);
    const double l_par = to_llr(par_val);
    result.extrinsic_coded[2 * t] = l_sys - la[2 * t];
    result.extrinsic_coded[2 * t + 1] = l_par - la[2 * t + 1];
    if (!tail) result.aposteriori_info[t] = l_sys;
    if (diag) diag->flow[t] = flow + alpha_shift[t] + beta_shift[t + 1];
  }
  return result;
}

std::vector<std::uint8_t> hard_decision(std::span<const double> llrs) {
  std::vector<std::uint8_t> bits(llrs.size());
  for (std::size_t i = 0; i < llrs.size(); ++i)
    bits[i] = llrs[i] >= 0.0 ? 0 : 1;
  return bits;
}

}  // namespace tq
