#include "ndncdn/ndn/strategy.hpp"

#include <cmath>
#include <string>

namespace ndncdn::ndn {

std::string_view
toString(StrategyMode mode)
{
  switch (mode) {
    case StrategyMode::BestRouteFailover:
      return "best_route_failover";
    case StrategyMode::WeightedBestPath:
      return "weighted_best_path";
  }
  return "?";
}

StrategyMode
parseStrategyMode(std::string_view text)
{
  if (text == "best_route_failover") {
    return StrategyMode::BestRouteFailover;
  }
  if (text == "weighted_best_path") {
    return StrategyMode::WeightedBestPath;
  }
  throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

int64_t
computePathWeight(double delayMs, double lossPercent)
{
  if (!(delayMs >= 0.0)) {
    throw std::domain_error("path delay must be >= 0, got " + std::to_string(delayMs));
  }
  if (!(lossPercent >= 0.0 && lossPercent <= 100.0)) {
    throw std::domain_error("loss percent must be within [0, 100], got " +
                            std::to_string(lossPercent));
  }
  // 100 * 0.001 is not exact in binary; snap values within 1e-9 of an integer first
  double raw = 100.0 * delayMs + 100.0 * lossPercent;
  double nearest = std::round(raw);
  if (std::abs(raw - nearest) < 1e-9) {
    return static_cast<int64_t>(nearest);
  }
  return static_cast<int64_t>(std::ceil(raw));
}

std::optional<FaceId>
selectFace(const FibEntry& entry, const QualityMap& qualities, StrategyMode mode)
{
  std::optional<FaceId> best;
  int64_t bestScore = 0;

  for (const auto& hop : entry.nexthops) {
    FaceQuality q;
    if (auto it = qualities.find(hop.face); it != qualities.end()) {
      q = it->second;
    }
    if (!q.alive) {
      continue;
    }
    int64_t score = mode == StrategyMode::BestRouteFailover ?
                    hop.cost : computePathWeight(q.delayMs, q.lossPercent);
    if (!best || score < bestScore || (score == bestScore && hop.face < *best)) {
      best = hop.face;
      bestScore = score;
    }
  }
  return best;
}

} // namespace ndncdn::ndn
