#include "ndncdn/sim/topology.hpp"

namespace ndncdn::sim {

CdnTopology
buildCdnTopology(Network& net, const TopologyConfig& cfg)
{
  if (cfg.upstream.empty() || cfg.origin.empty()) {
    throw Network::Error("topology needs at least one intermediate and one origin");
  }

  CdnTopology topo;
  topo.client = net.addNode("client", NodeRole::Client);
  topo.clientSideCache = net.addNode("csc", NodeRole::ClientSideCache);
  for (size_t i = 0; i < cfg.upstream.size(); ++i) {
    topo.intermediates.push_back(
      net.addNode("int" + std::to_string(i + 1), NodeRole::IntermediateCache));
  }
  for (size_t j = 0; j < cfg.origin.size(); ++j) {
    topo.origins.push_back(net.addNode("origin" + std::to_string(j + 1), NodeRole::Origin));
  }

  topo.accessLink = net.addLink(topo.client, topo.clientSideCache, cfg.access);
  for (size_t i = 0; i < cfg.upstream.size(); ++i) {
    topo.upstreamLinks.push_back(
      net.addLink(topo.clientSideCache, topo.intermediates[i], cfg.upstream[i]));
  }
  topo.originLinks.resize(cfg.upstream.size());
  for (size_t i = 0; i < cfg.upstream.size(); ++i) {
    for (size_t j = 0; j < cfg.origin.size(); ++j) {
      topo.originLinks[i].push_back(
        net.addLink(topo.intermediates[i], topo.origins[j], cfg.origin[j]));
    }
  }
  return topo;
}

} // namespace ndncdn::sim
