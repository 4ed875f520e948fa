#ifndef NDNCDN_HTTP_PROXY_HPP
#define NDNCDN_HTTP_PROXY_HPP

#include "ndncdn/core/lru-cache.hpp"
#include "ndncdn/http/tcp.hpp"

#include <list>
#include <string_view>

namespace ndncdn::http {

enum class ProxyRole
{
  Forward,
  Reverse,
};

enum class LbPolicy
{
  RoundRobin,
  Single,
};

enum class RangeMode
{
  /// forward the range upstream and cache nothing
  Bypass,
  /// fetch and cache the whole object, serve the range out of it
  FullFetch,
};

std::string_view
toString(LbPolicy policy);

std::string_view
toString(RangeMode mode);

/// \throw std::invalid_argument on an unknown name
LbPolicy
parseLbPolicy(std::string_view text);

RangeMode
parseRangeMode(std::string_view text);

struct ProxyConfig
{
  ProxyRole role = ProxyRole::Reverse;
  /// ordered upstream nodes; must be adjacent
  std::vector<NodeId> upstreams;
  LbPolicy lbPolicy = LbPolicy::RoundRobin;
  RangeMode rangeMode = RangeMode::Bypass;
  bool cacheEnabled = true;
  uint64_t cacheCapacity = 4ull << 30;
  /// keep filling the cache after the downstream that triggered a fetch goes away
  bool backgroundFill = true;
};

struct ProxyCounters
{
  uint64_t cacheHits = 0;
  uint64_t cacheMisses = 0;
  uint64_t upstreamRequests = 0;
  uint64_t retries = 0;
  uint64_t failedTransfers = 0;
  uint64_t rejected = 0;
  uint64_t objectsCached = 0;
  uint64_t bytesCached = 0;
};

/** \brief Caching HTTP proxy with whole-object LRU storage.
 *
 *  Misses are streamed cut-through: downstream bytes flow as upstream bytes
 *  arrive, and the object enters the cache only once complete. An upstream
 *  failure before the first byte is retried once on the next upstream; after
 *  the first byte it resets the downstream exchange.
 */
class HttpProxy
{
public:
  HttpProxy(sim::Network& net, NodeId node, ProxyConfig config, const ContentCatalog& catalog,
            TcpConfig tcp = {});

  HttpProxy(const HttpProxy&) = delete;
  HttpProxy& operator=(const HttpProxy&) = delete;

  TcpStack&
  stack() noexcept
  {
    return m_stack;
  }

  const ProxyConfig&
  config() const noexcept
  {
    return m_config;
  }

  /// Adds an already established connection to \p upstream to the pool.
  void
  prewarm(TcpStack& upstream);

  uint64_t
  cacheUsed() const noexcept
  {
    return m_cache.used();
  }

  bool
  isCached(const std::string& url) const
  {
    return m_cache.peek(url) != nullptr;
  }

  const ProxyCounters&
  counters() const noexcept
  {
    return m_counters;
  }

  /// Upstream of the most recently started fetch, if any.
  std::optional<NodeId>
  lastUpstream() const noexcept
  {
    return m_lastUpstream;
  }

  /// Requests sent to each upstream.
  const std::map<NodeId, uint64_t>&
  upstreamRequests() const noexcept
  {
    return m_perUpstream;
  }

private:
  struct Fetch;

  struct Serving
  {
    TcpServerEnd* end;
    uint64_t offset;
    uint64_t length;
    bool started = false;
  };

  struct Fetch
  {
    HttpRequest request;
    size_t upstreamIndex = 0;
    int attempts = 0;
    TcpClientEnd* conn = nullptr;
    NodeId upstream = 0;
    bool started = false;
    uint64_t length = 0;
    uint64_t received = 0;
    bool store = false;
    std::list<Serving> servings;
  };

  using FetchIter = std::list<Fetch>::iterator;

  void
  onRequest(TcpServerEnd& end, const HttpRequest& req);

  void
  onDownstreamAbort(TcpServerEnd& end);

  void
  startAttempt(FetchIter fetch);

  void
  onUpstreamStart(FetchIter fetch, uint64_t length);

  void
  onUpstreamBytes(FetchIter fetch, uint64_t bytes);

  void
  onUpstreamComplete(FetchIter fetch);

  void
  onUpstreamFailed(FetchIter fetch, TcpFailure failure, const std::string& reason);

  TcpClientEnd&
  acquire(NodeId upstream);

  static void
  feed(Serving& s, uint64_t upstreamBytes);

private:
  sim::Network& m_net;
  TcpStack m_stack;
  ProxyConfig m_config;
  const ContentCatalog& m_catalog;
  LruByteCache<std::string, uint64_t> m_cache;
  std::list<Fetch> m_fetches;
  std::map<TcpServerEnd*, FetchIter> m_servingIndex;
  std::map<NodeId, std::vector<TcpClientEnd*>> m_pool;
  size_t m_rrNext = 0;
  std::optional<NodeId> m_lastUpstream;
  std::map<NodeId, uint64_t> m_perUpstream;
  ProxyCounters m_counters;
};

} // namespace ndncdn::http

#endif // NDNCDN_HTTP_PROXY_HPP
