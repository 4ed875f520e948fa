#ifndef NDNCDN_EXP_TESTBED_HPP
#define NDNCDN_EXP_TESTBED_HPP

#include "ndncdn/exp/config.hpp"
#include "ndncdn/http/client.hpp"
#include "ndncdn/http/origin.hpp"
#include "ndncdn/ndn/consumer.hpp"
#include "ndncdn/ndn/producer.hpp"

#include <map>
#include <memory>
#include <ostream>

namespace ndncdn::exp {

/// Name of the object served in every NDN run.
extern const char NDN_OBJECT_PREFIX[];
/// URL of the object served in every HTTP run.
extern const char HTTP_OBJECT_URL[];

/** \brief NDN plane on the CDN hierarchy for a single run.
 *
 *  The object is published at the first origin; the client-side cache routes to both
 *  intermediates, each intermediate routes to the first origin.
 */
class NdnTestbed
{
public:
  NdnTestbed(const ScenarioConfig& cfg, const sim::TopologyConfig& topology, uint64_t seed,
             uint64_t objectSize, std::ostream* trace = nullptr);

  sim::Network&
  net() noexcept
  {
    return *m_net;
  }

  const sim::CdnTopology&
  topo() const noexcept
  {
    return m_topo;
  }

  const ContentObject&
  content() const noexcept
  {
    return m_content;
  }

  ndn::Forwarder&
  clientSideCache() noexcept
  {
    return *m_csc;
  }

  ndn::Forwarder&
  intermediate(size_t i) noexcept
  {
    return *m_intermediates.at(i);
  }

  /// Data packets answered by the producer so far.
  uint64_t
  originTouches() const noexcept
  {
    return m_producer->served();
  }

  /// Runs one retrieval to completion (and drains the event queue).
  ndn::RetrievalResult
  fetch(std::optional<ndn::ByteRange> range = std::nullopt);

  /// Payload bytes cached per node name.
  std::map<std::string, uint64_t>
  cacheBytes() const;

private:
  std::unique_ptr<sim::Network> m_net;
  sim::CdnTopology m_topo;
  ContentObject m_content;
  std::unique_ptr<ndn::Forwarder> m_client;
  std::unique_ptr<ndn::Forwarder> m_csc;
  std::vector<std::unique_ptr<ndn::Forwarder>> m_intermediates;
  std::unique_ptr<ndn::Forwarder> m_origin;
  std::unique_ptr<ndn::Producer> m_producer;
  std::unique_ptr<ndn::Consumer> m_consumer;
};

/** \brief HTTP plane on the CDN hierarchy for a single run.
 *
 *  The client-side cache is a forward proxy balancing over both intermediates, which are
 *  reverse proxies in front of the first origin.
 */
class HttpTestbed
{
public:
  HttpTestbed(const ScenarioConfig& cfg, const sim::TopologyConfig& topology, uint64_t seed,
              uint64_t objectSize, std::ostream* trace = nullptr);

  sim::Network&
  net() noexcept
  {
    return *m_net;
  }

  const sim::CdnTopology&
  topo() const noexcept
  {
    return m_topo;
  }

  http::HttpProxy&
  clientSideCache() noexcept
  {
    return *m_csc;
  }

  http::HttpProxy&
  intermediate(size_t i) noexcept
  {
    return *m_intermediates.at(i);
  }

  http::HttpClient&
  client() noexcept
  {
    return *m_client;
  }

  uint64_t
  originTouches() const noexcept
  {
    return m_origin->touches();
  }

  /// Runs one request to completion (and drains the event queue).
  http::HttpResult
  get(std::optional<http::ByteRange> range = std::nullopt,
      std::optional<uint64_t> abortAfter = std::nullopt);

  std::map<std::string, uint64_t>
  cacheBytes() const;

private:
  std::unique_ptr<sim::Network> m_net;
  sim::CdnTopology m_topo;
  http::ContentCatalog m_catalog;
  std::unique_ptr<http::HttpOrigin> m_origin;
  std::vector<std::unique_ptr<http::HttpProxy>> m_intermediates;
  std::unique_ptr<http::HttpProxy> m_csc;
  std::unique_ptr<http::HttpClient> m_client;
};

} // namespace ndncdn::exp

#endif // NDNCDN_EXP_TESTBED_HPP
