#ifndef NDNCDN_NDN_STRATEGY_HPP
#define NDNCDN_NDN_STRATEGY_HPP

#include "ndncdn/ndn/fib.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace ndncdn::ndn {

/// Observed or configured condition of one upstream face.
struct FaceQuality
{
  /// one-way delay estimate, ms
  double delayMs = 0.0;
  /// loss estimate in percent, 0..100
  double lossPercent = 0.0;
  bool alive = true;
};

using QualityMap = std::map<FaceId, FaceQuality>;

enum class StrategyMode
{
  /// lowest static cost among live faces
  BestRouteFailover,
  /// lowest computePathWeight among live faces
  WeightedBestPath,
};

std::string_view
toString(StrategyMode mode);

/// \throw std::invalid_argument on an unknown mode name
StrategyMode
parseStrategyMode(std::string_view text);

/** \brief Path weight: ceil(100 * delay_ms + 100 * loss_percent).
 *  \throw std::domain_error on negative delay or loss outside [0, 100]
 */
int64_t
computePathWeight(double delayMs, double lossPercent);

/** \brief Picks one upstream face for \p entry.
 *
 *  Faces absent from \p qualities are treated as alive with zero delay and loss.
 *  Ties go to the lowest face id. Returns nullopt when no live nexthop exists.
 */
std::optional<FaceId>
selectFace(const FibEntry& entry, const QualityMap& qualities, StrategyMode mode);

} // namespace ndncdn::ndn

#endif // NDNCDN_NDN_STRATEGY_HPP
