#include "ndncdn/exp/testbed.hpp"

#include <algorithm>

namespace ndncdn::exp {

using sim::NodeId;

const char NDN_OBJECT_PREFIX[] = "/cdn/object";
const char HTTP_OBJECT_URL[] = "/cdn/object";

namespace {

void
attachTrace(sim::Network& net, std::ostream* trace)
{
  if (trace == nullptr) {
    return;
  }
  net.scheduler().setTraceSink([trace] (const sim::TraceRecord& rec) {
    *trace << sim::formatTraceLine(rec) << '\n';
  });
}

} // namespace

NdnTestbed::NdnTestbed(const ScenarioConfig& cfg, const sim::TopologyConfig& topology,
                       uint64_t seed, uint64_t objectSize, std::ostream* trace)
  : m_net(std::make_unique<sim::Network>(seed))
  , m_topo(sim::buildCdnTopology(*m_net, topology))
  , m_content{Name(NDN_OBJECT_PREFIX), objectSize, cfg.ndn.chunkSize}
{
  attachTrace(*m_net, trace);

  auto make = [&] (NodeId node, bool cs) {
    ndn::ForwarderConfig fc;
    fc.csEnabled = cs;
    fc.csCapacity = cfg.cache.capacity;
    fc.strategy = cfg.ndn.strategy;
    fc.qualitySource = cfg.ndn.quality;
    fc.strategyInterval = cfg.ndn.strategyInterval;
    return std::make_unique<ndn::Forwarder>(*m_net, node, fc);
  };
  m_client = make(m_topo.client, false);
  m_csc = make(m_topo.clientSideCache, cfg.cache.clientSide);
  for (NodeId n : m_topo.intermediates) {
    m_intermediates.push_back(make(n, cfg.cache.intermediate));
  }
  m_origin = make(m_topo.origins.at(0), false);
  m_producer = std::make_unique<ndn::Producer>(*m_origin);
  m_producer->publish(m_content);

  const Name& prefix = m_content.prefix;
  m_client->addRoute(prefix, m_net->faceToward(m_topo.client, m_topo.clientSideCache));
  for (NodeId n : m_topo.intermediates) {
    m_csc->addRoute(prefix, m_net->faceToward(m_topo.clientSideCache, n));
  }
  for (auto& fw : m_intermediates) {
    fw->addRoute(prefix, m_net->faceToward(fw->node(), m_topo.origins[0]));
  }

  ndn::ConsumerConfig cc;
  cc.window = cfg.ndn.window;
  cc.maxRetries = cfg.ndn.maxRetries;
  cc.chunkSize = cfg.ndn.chunkSize;
  m_consumer = std::make_unique<ndn::Consumer>(*m_net, *m_client, cc,
                                               sim::Rng(seed, {0x6e646e}).next());
}

ndn::RetrievalResult
NdnTestbed::fetch(std::optional<ndn::ByteRange> range)
{
  m_consumer->fetch(m_content.prefix, range, [] (const ndn::RetrievalResult&) {});
  m_net->scheduler().run();
  return m_consumer->result();
}

std::map<std::string, uint64_t>
NdnTestbed::cacheBytes() const
{
  std::map<std::string, uint64_t> out;
  out[m_net->nodeName(m_csc->node())] = m_csc->contentStore().payloadBytes();
  for (const auto& fw : m_intermediates) {
    out[m_net->nodeName(fw->node())] = fw->contentStore().payloadBytes();
  }
  return out;
}

HttpTestbed::HttpTestbed(const ScenarioConfig& cfg, const sim::TopologyConfig& topology,
                         uint64_t seed, uint64_t objectSize, std::ostream* trace)
  : m_net(std::make_unique<sim::Network>(seed))
  , m_topo(sim::buildCdnTopology(*m_net, topology))
{
  attachTrace(*m_net, trace);
  m_catalog.add(HTTP_OBJECT_URL, objectSize);
  m_origin = std::make_unique<http::HttpOrigin>(*m_net, m_topo.origins.at(0), m_catalog);

  for (NodeId n : m_topo.intermediates) {
    http::ProxyConfig pc;
    pc.role = http::ProxyRole::Reverse;
    pc.upstreams = {m_topo.origins[0]};
    pc.lbPolicy = http::LbPolicy::Single;
    pc.rangeMode = cfg.http.rangeMode;
    pc.cacheEnabled = cfg.cache.intermediate;
    pc.cacheCapacity = cfg.cache.capacity;
    m_intermediates.push_back(std::make_unique<http::HttpProxy>(*m_net, n, pc, m_catalog));
  }
  http::ProxyConfig pc;
  pc.role = http::ProxyRole::Forward;
  // nearest first, the same preference as the NDN routes' static cost
  pc.upstreams = m_topo.intermediates;
  std::stable_sort(pc.upstreams.begin(), pc.upstreams.end(), [this] (NodeId a, NodeId b) {
    auto delay = [this] (NodeId n) {
      return m_net->link(m_net->linkBetween(m_topo.clientSideCache, n)).params().delay;
    };
    return delay(a) < delay(b);
  });
  pc.lbPolicy = cfg.http.lbPolicy;
  pc.rangeMode = cfg.http.rangeMode;
  pc.cacheEnabled = cfg.cache.clientSide;
  pc.cacheCapacity = cfg.cache.capacity;
  m_csc = std::make_unique<http::HttpProxy>(*m_net, m_topo.clientSideCache, pc, m_catalog);
  m_client = std::make_unique<http::HttpClient>(*m_net, m_topo.client, m_topo.clientSideCache);

  if (cfg.http.prewarm) {
    for (auto& proxy : m_intermediates) {
      m_csc->prewarm(proxy->stack());
      proxy->prewarm(m_origin->stack());
    }
  }
}

http::HttpResult
HttpTestbed::get(std::optional<http::ByteRange> range, std::optional<uint64_t> abortAfter)
{
  m_client->get({HTTP_OBJECT_URL, range, true}, abortAfter, [] (const http::HttpResult&) {});
  m_net->scheduler().run();
  return m_client->result();
}

std::map<std::string, uint64_t>
HttpTestbed::cacheBytes() const
{
  std::map<std::string, uint64_t> out;
  out[m_net->nodeName(m_topo.clientSideCache)] = m_csc->cacheUsed();
  for (size_t i = 0; i < m_intermediates.size(); ++i) {
    out[m_net->nodeName(m_topo.intermediates[i])] = m_intermediates[i]->cacheUsed();
  }
  return out;
}

} // namespace ndncdn::exp
