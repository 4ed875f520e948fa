#ifndef NDNCDN_SIM_TOPOLOGY_HPP
#define NDNCDN_SIM_TOPOLOGY_HPP

#include "ndncdn/sim/network.hpp"

#include <vector>

namespace ndncdn::sim {

/// Delay and loss for the client, client-side cache, two intermediates and origins.
struct TopologyConfig
{
  /// client <-> client-side cache
  LinkParams access{50ms, 0.0, {}};
  /// client-side cache <-> intermediate i, one entry per intermediate
  std::vector<LinkParams> upstream{{10ms, 0.0, {}}, {10ms, 0.0, {}}};
  /// intermediate <-> origin j, one entry per origin, applied from every intermediate
  std::vector<LinkParams> origin{{10ms, 0.0, {}}, {50ms, 0.0, {}}};
};

struct CdnTopology
{
  NodeId client = 0;
  NodeId clientSideCache = 0;
  std::vector<NodeId> intermediates;
  std::vector<NodeId> origins;

  LinkId accessLink = 0;
  /// upstreamLinks[i] joins the client-side cache and intermediates[i]
  std::vector<LinkId> upstreamLinks;
  /// originLinks[i][j] joins intermediates[i] and origins[j]
  std::vector<std::vector<LinkId>> originLinks;
};

/** \brief Builds the client / client-side cache / intermediates / origins hierarchy.
 *
 *  Node names are `client`, `csc`, `int1`, `int2`, ..., `origin1`, `origin2`, ...
 */
CdnTopology
buildCdnTopology(Network& net, const TopologyConfig& cfg);

} // namespace ndncdn::sim

#endif // NDNCDN_SIM_TOPOLOGY_HPP
