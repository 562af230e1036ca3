#include "tq/equalizer.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace tq {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::exact: return "exact";
    case Algorithm::rs: return "rs";
    case Algorithm::m: return "m";
    case Algorithm::mstar: return "mstar";
  }
  return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "exact") return Algorithm::exact;
  if (name == "rs") return Algorithm::rs;
  if (name == "m") return Algorithm::m;
  if (name == "mstar") return Algorithm::mstar;
  throw std::invalid_argument("unknown algorithm: " + name);
}

int EqualizerConfig::budget() const {
  switch (algorithm) {
    case Algorithm::rs: return reduced_memory;
    case Algorithm::m:
    case Algorithm::mstar: return state_budget;
    case Algorithm::exact: return 0;
  }
  return 0;
}

void EqualizerConfig::validate(const ChannelSpec& spec) const {
  switch (algorithm) {
    case Algorithm::exact:
      break;
    case Algorithm::rs:
      if (reduced_memory < 0 || reduced_memory > spec.memory())
        throw std::invalid_argument("rs: reduced memory must lie in [0, S]");
      break;
    case Algorithm::m:
    case Algorithm::mstar:
      if (state_budget < 1)
        throw std::invalid_argument("state budget must be >= 1");
      break;
  }
}

namespace {

struct Candidate {
  StateIndex state;
  double alpha;
};

// Scratch shared across sections of one forward pass.
struct ForwardWorkspace {
  std::vector<Candidate> candidates;
  std::vector<std::int32_t> state_slot;   // state -> candidate index
  std::vector<std::int32_t> class_slot;   // rs: class key -> survivor candidate
  std::vector<std::uint32_t> order;       // selection scratch
  std::vector<std::uint32_t> survivors;   // candidate indices
  std::vector<std::int32_t> final_slot;   // candidate -> node slot, -1 = deleted
  std::vector<std::int32_t> merge_target; // candidate -> absorbing candidate
  std::vector<double> snapshot;           // survivor alphas at selection time
};

double mass_of(std::span<const Candidate> candidates) {
  double m = kLogZero;
  for (const Candidate& c : candidates) m = log_sum(m, c.alpha);
  return m;
}

// alpha descending, then state index ascending; a total order since states
// are unique within a section.
inline bool better(const Candidate& a, const Candidate& b) {
  if (a.alpha != b.alpha) return a.alpha > b.alpha;
  return a.state < b.state;
}

}  // namespace

Trellis forward_recursion(const ChannelSpec& spec,
                          std::span<const Complex> received,
                          std::span<const double> apriori,
                          const EqualizerConfig& config, bool diagnostics) {
  spec.validate();
  config.validate(spec);
  const int k = spec.bits_per_symbol;
  const int s = spec.memory();
  if (apriori.size() % static_cast<std::size_t>(k) != 0)
    throw std::invalid_argument("forward_recursion: a priori length must be a multiple of K");
  const int symbols = static_cast<int>(apriori.size()) / k;
  if (symbols < 1) throw std::invalid_argument("forward_recursion: empty block");
  if (received.size() != static_cast<std::size_t>(symbols + s))
    throw std::invalid_argument("forward_recursion: received length must be L + S");

  const LlrSequence la = clamp_llrs(apriori);
  const BranchMetricTable metric(spec, received, la);

  Trellis trellis;
  trellis.bits_per_symbol = k;
  trellis.memory = s;
  trellis.symbol_count = symbols;
  trellis.sections.resize(symbols + s);
  trellis.alpha_shift.resize(symbols + s);

  ForwardWorkspace ws;
  ws.state_slot.assign(state_count(k, s), -1);
  if (config.algorithm == Algorithm::rs)
    ws.class_slot.assign(state_count(k, config.reduced_memory), -1);

  std::vector<TrellisNode> root{TrellisNode{0, 0.0, kLogZero}};
  std::span<const TrellisNode> prev(root);

  for (int t = 0; t < trellis.section_count(); ++t) {
    TrellisSection& section = trellis.sections[t];
    const bool tail = t >= symbols;
    const std::uint32_t inputs = tail ? 1u : 1u << k;

    // Expansion: every branch from every surviving state, alphas accumulated
    // per distinct successor.
    ws.candidates.clear();
    section.branches.clear();
    section.branches.reserve(prev.size() * inputs);
    for (std::uint32_t p = 0; p < prev.size(); ++p) {
      const double base = prev[p].alpha;
      for (std::uint32_t u = 0; u < inputs; ++u) {
        const StateIndex next = successor_state(prev[p].state, u, k, s);
        const double gamma = metric.gamma(t, prev[p].state, u);
        std::int32_t c = ws.state_slot[next];
        if (c < 0) {
          c = static_cast<std::int32_t>(ws.candidates.size());
          ws.state_slot[next] = c;
          ws.candidates.push_back({next, kLogZero});
        }
        ws.candidates[c].alpha = log_sum(ws.candidates[c].alpha, base + gamma);
        section.branches.push_back(
            {p, static_cast<std::uint32_t>(c), static_cast<std::uint16_t>(u), gamma});
      }
    }
    for (const Candidate& c : ws.candidates) ws.state_slot[c.state] = -1;

    if (diagnostics) section.mass_before_reduction = mass_of(ws.candidates);

    // Reduction.
    const std::size_t n = ws.candidates.size();
    ws.final_slot.assign(n, -1);
    ws.merge_target.assign(n, -1);
    ws.survivors.clear();
    bool branches_deleted = false;

    switch (config.algorithm) {
      case Algorithm::exact: {
        for (std::uint32_t c = 0; c < n; ++c) ws.survivors.push_back(c);
        break;
      }
      case Algorithm::rs: {
        // States sharing their S' most recent tuples are indistinguishable;
        // the best class member absorbs the rest and keeps its full history.
        const StateIndex class_mask = state_count(k, config.reduced_memory) - 1;
        for (std::uint32_t c = 0; c < n; ++c) {
          const StateIndex key = ws.candidates[c].state & class_mask;
          const std::int32_t cur = ws.class_slot[key];
          if (cur < 0 || better(ws.candidates[c], ws.candidates[cur]))
            ws.class_slot[key] = static_cast<std::int32_t>(c);
        }
        for (std::uint32_t c = 0; c < n; ++c) {
          const StateIndex key = ws.candidates[c].state & class_mask;
          const auto surv = static_cast<std::uint32_t>(ws.class_slot[key]);
          if (surv == c) {
            ws.survivors.push_back(c);
          } else {
            ws.candidates[surv].alpha =
                log_sum(ws.candidates[surv].alpha, ws.candidates[c].alpha);
            ws.merge_target[c] = static_cast<std::int32_t>(surv);
          }
        }
        for (std::uint32_t c : ws.survivors)
          ws.class_slot[ws.candidates[c].state & class_mask] = -1;
        break;
      }
      case Algorithm::m:
      case Algorithm::mstar: {
        const auto m_budget = static_cast<std::size_t>(config.state_budget);
        if (n <= m_budget) {
          for (std::uint32_t c = 0; c < n; ++c) ws.survivors.push_back(c);
          break;
        }
        ws.order.resize(n);
        std::iota(ws.order.begin(), ws.order.end(), 0u);
        // Partial selection of the M largest forward metrics.
        std::nth_element(ws.order.begin(), ws.order.begin() + m_budget - 1,
                         ws.order.end(), [&](std::uint32_t a, std::uint32_t b) {
                           return better(ws.candidates[a], ws.candidates[b]);
                         });
        ws.survivors.assign(ws.order.begin(), ws.order.begin() + m_budget);

        if (config.algorithm == Algorithm::m) {
          branches_deleted = true;  // excess states vanish with their branches
          break;
        }

        // Excess states are merged, not deleted: redirect into the survivor
        // with the closest history, largest alpha at selection time breaking
        // distance ties. Excess set is processed in descending alpha order.
        ws.snapshot.resize(n);
        for (std::uint32_t c : ws.survivors) ws.snapshot[c] = ws.candidates[c].alpha;
        std::sort(ws.order.begin() + m_budget, ws.order.end(),
                  [&](std::uint32_t a, std::uint32_t b) {
                    return better(ws.candidates[a], ws.candidates[b]);
                  });
        for (std::size_t e = m_budget; e < n; ++e) {
          const std::uint32_t exc = ws.order[e];
          const StateIndex exc_state = ws.candidates[exc].state;
          std::uint32_t best = ws.survivors[0];
          int best_dist = state_distance(exc_state, ws.candidates[best].state, k, s);
          for (std::size_t v = 1; v < ws.survivors.size(); ++v) {
            const std::uint32_t cand = ws.survivors[v];
            const int dist = state_distance(exc_state, ws.candidates[cand].state, k, s);
            if (dist < best_dist ||
                (dist == best_dist &&
                 (ws.snapshot[cand] > ws.snapshot[best] ||
                  (ws.snapshot[cand] == ws.snapshot[best] &&
                   ws.candidates[cand].state < ws.candidates[best].state)))) {
              best = cand;
              best_dist = dist;
            }
          }
          ws.candidates[best].alpha =
              log_sum(ws.candidates[best].alpha, ws.candidates[exc].alpha);
          ws.merge_target[exc] = static_cast<std::int32_t>(best);
        }
        break;
      }
    }

    // Survivors in state order become the section's nodes.
    std::sort(ws.survivors.begin(), ws.survivors.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                return ws.candidates[a].state < ws.candidates[b].state;
              });
    double shift = kLogZero;
    for (std::uint32_t c : ws.survivors)
      shift = std::max(shift, ws.candidates[c].alpha);
    if (diagnostics) {
      double m = kLogZero;
      for (std::uint32_t c : ws.survivors) m = log_sum(m, ws.candidates[c].alpha);
      section.mass_after_reduction = m;
    }

    section.nodes.resize(ws.survivors.size());
    for (std::uint32_t slot = 0; slot < ws.survivors.size(); ++slot) {
      const Candidate& c = ws.candidates[ws.survivors[slot]];
      section.nodes[slot] = {c.state, c.alpha - shift, kLogZero};
      ws.final_slot[ws.survivors[slot]] = static_cast<std::int32_t>(slot);
    }
    for (std::size_t c = 0; c < n; ++c)
      if (ws.merge_target[c] >= 0)
        ws.final_slot[c] = ws.final_slot[ws.merge_target[c]];

    // Retarget branches onto node slots; only top-M deletion drops any.
    if (branches_deleted) {
      std::size_t kept = 0;
      for (const TrellisBranch& b : section.branches) {
        const std::int32_t slot = ws.final_slot[b.target];
        if (slot < 0) continue;
        section.branches[kept] = b;
        section.branches[kept].target = static_cast<std::uint32_t>(slot);
        ++kept;
      }
      section.branches.resize(kept);
    } else {
      for (TrellisBranch& b : section.branches)
        b.target = static_cast<std::uint32_t>(ws.final_slot[b.target]);
    }

    trellis.alpha_shift[t] = (t > 0 ? trellis.alpha_shift[t - 1] : 0.0) + shift;
    prev = section.nodes;
  }

  return trellis;
}

void backward_recursion(Trellis& trellis) {
  if (trellis.sections.empty()) return;
  for (TrellisNode& n : trellis.sections.back().nodes) n.beta = 0.0;
  for (int t = trellis.section_count() - 1; t > 0; --t) {
    const TrellisSection& section = trellis.sections[t];
    std::vector<TrellisNode>& prev = trellis.sections[t - 1].nodes;
    for (TrellisNode& n : prev) n.beta = kLogZero;
    for (const TrellisBranch& b : section.branches) {
      TrellisNode& origin = prev[b.origin];
      origin.beta = log_sum(origin.beta, b.gamma + section.nodes[b.target].beta);
    }
  }
}

PosteriorResult completion(const Trellis& trellis,
                           std::span<const double> apriori) {
  const int k = trellis.bits_per_symbol;
  const LlrSequence la = clamp_llrs(apriori);
  PosteriorResult result;
  result.aposteriori.resize(la.size());
  result.extrinsic.resize(la.size());

  std::vector<double> pos(k), neg(k);
  for (int t = 0; t < trellis.symbol_count; ++t) {
    const TrellisSection& section = trellis.sections[t];
    std::fill(pos.begin(), pos.end(), kLogZero);
    std::fill(neg.begin(), neg.end(), kLogZero);
    for (const TrellisBranch& b : section.branches) {
      const double origin_alpha =
          t > 0 ? trellis.sections[t - 1].nodes[b.origin].alpha : 0.0;
      const double value = origin_alpha + b.gamma + section.nodes[b.target].beta;
      for (int bit = 0; bit < k; ++bit) {
        if (b.input >> (k - 1 - bit) & 1u)
          neg[bit] = log_sum(neg[bit], value);
        else
          pos[bit] = log_sum(pos[bit], value);
      }
    }
    for (int bit = 0; bit < k; ++bit) {
      const std::size_t j = static_cast<std::size_t>(t) * k + bit;
      double llr;
      if (pos[bit] == kLogZero && neg[bit] == kLogZero) {
        llr = 0.0;  // unreachable with finite gammas; keep outputs finite
      } else if (pos[bit] == kLogZero) {
        llr = -kLlrClamp;
      } else if (neg[bit] == kLogZero) {
        llr = kLlrClamp;
      } else {
        llr = pos[bit] - neg[bit];
      }
      result.aposteriori[j] = llr;
      result.extrinsic[j] = llr - la[j];
    }
  }
  return result;
}

namespace {

PosteriorResult run_with(const ChannelSpec& spec,
                         std::span<const Complex> received,
                         std::span<const double> apriori,
                         const EqualizerConfig& config) {
  Trellis trellis = forward_recursion(spec, received, apriori, config);
  backward_recursion(trellis);
  return completion(trellis, apriori);
}

}  // namespace

PosteriorResult run_exact_bcjr(const ChannelSpec& spec,
                               std::span<const Complex> received,
                               std::span<const double> apriori) {
  return run_with(spec, received, apriori, {Algorithm::exact, 0, 0});
}

PosteriorResult run_rs_bcjr(const ChannelSpec& spec,
                            std::span<const Complex> received,
                            std::span<const double> apriori,
                            int reduced_memory) {
  return run_with(spec, received, apriori, {Algorithm::rs, 0, reduced_memory});
}

PosteriorResult run_m_bcjr(const ChannelSpec& spec,
                           std::span<const Complex> received,
                           std::span<const double> apriori, int state_budget) {
  return run_with(spec, received, apriori, {Algorithm::m, state_budget, 0});
}

PosteriorResult run_mstar_bcjr(const ChannelSpec& spec,
                               std::span<const Complex> received,
                               std::span<const double> apriori,
                               int state_budget) {
  return run_with(spec, received, apriori, {Algorithm::mstar, state_budget, 0});
}

PosteriorResult run_equalizer(const ChannelSpec& spec,
                              std::span<const Complex> received,
                              std::span<const double> apriori,
                              const EqualizerConfig& config) {
  return run_with(spec, received, apriori, config);
}

PosteriorResult brute_force_posterior(const ChannelSpec& spec,
                                      std::span<const Complex> received,
                                      std::span<const double> apriori) {
  spec.validate();
  const int k = spec.bits_per_symbol;
  const int s = spec.memory();
  const int n_bits = static_cast<int>(apriori.size());
  if (n_bits % k != 0)
    throw std::invalid_argument("brute_force_posterior: a priori length must be a multiple of K");
  if (n_bits == 0 || n_bits > kBruteForceMaxBits)
    throw std::invalid_argument("brute_force_posterior: block exceeds the size guard");
  const int symbols = n_bits / k;
  if (received.size() != static_cast<std::size_t>(symbols + s))
    throw std::invalid_argument("brute_force_posterior: received length must be L + S");

  const LlrSequence la = clamp_llrs(apriori);
  std::vector<double> pos(n_bits, kLogZero), neg(n_bits, kLogZero);
  std::vector<Complex> x(symbols);

  for (std::uint64_t seq = 0; seq < (std::uint64_t{1} << n_bits); ++seq) {
    double lambda = 0.0;
    for (int j = 0; j < n_bits; ++j) {
      const int bit = seq >> j & 1u;
      lambda += prior_from_llr(la[j], bit == 0 ? +1 : -1);
    }
    for (int t = 0; t < symbols; ++t) {
      std::uint32_t label = 0;
      for (int b = 0; b < k; ++b)
        label = label << 1 | static_cast<std::uint32_t>(seq >> (t * k + b) & 1u);
      x[t] = spec.constellation[label];
    }
    for (int i = 1; i <= symbols + s; ++i) {
      Complex f{0.0, 0.0};
      for (int j = 0; j <= s; ++j) {
        const int time = i - j;
        if (time >= 1 && time <= symbols) f += spec.taps[j] * x[time - 1];
      }
      lambda -= std::norm(received[i - 1] - f) / spec.noise_variance;
    }
    for (int j = 0; j < n_bits; ++j) {
      if (seq >> j & 1u)
        neg[j] = log_sum(neg[j], lambda);
      else
        pos[j] = log_sum(pos[j], lambda);
    }
  }

  PosteriorResult result;
  result.aposteriori.resize(n_bits);
  result.extrinsic.resize(n_bits);
  for (int j = 0; j < n_bits; ++j) {
    result.aposteriori[j] = pos[j] - neg[j];
    result.extrinsic[j] = result.aposteriori[j] - la[j];
  }
  return result;
}

}  // namespace tq
