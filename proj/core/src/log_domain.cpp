#include "tq/log_domain.hpp"

namespace tq {

LlrSequence clamp_llrs(std::span<const double> llrs) {
  LlrSequence out(llrs.size());
  for (std::size_t i = 0; i < llrs.size(); ++i) out[i] = clamp_llr(llrs[i]);
  return out;
}

}  // namespace tq
