#pragma once

#include <cstdint>

#include "verdictforge/analysis.hpp"

namespace verdictforge {

/// Per-comment credibility pair. For valid quality vectors both weights
/// lie in [2, 50]: min (1+1)*1, max (5+5)*5.
struct StreamWeights {
  std::int64_t w_logic = 0;  // credibility on factual claims (harm, intent)
  std::int64_t w_ethic = 0;  // credibility on character claims (empathy, apology)

  friend bool operator==(const StreamWeights&, const StreamWeights&) = default;
};

/// w_logic = (justification + deliberation) * nonbias
/// w_ethic = (ethic + fairness) * nonbias
/// Exact integer arithmetic; weights are absolute, never normalized
/// across comments.
constexpr StreamWeights split_stream_weights(const QualityVector& quality) {
  return StreamWeights{
      static_cast<std::int64_t>(quality.justification + quality.deliberation) *
          quality.nonbias,
      static_cast<std::int64_t>(quality.ethic + quality.fairness) *
          quality.nonbias,
  };
}

}  // namespace verdictforge
