#include "ndncdn/http/proxy.hpp"

#include <algorithm>

namespace ndncdn::http {

std::string_view
toString(LbPolicy policy)
{
  return policy == LbPolicy::RoundRobin ? "round_robin" : "single";
}

std::string_view
toString(RangeMode mode)
{
  return mode == RangeMode::Bypass ? "bypass" : "full_fetch";
}

LbPolicy
parseLbPolicy(std::string_view text)
{
  if (text == "round_robin") {
    return LbPolicy::RoundRobin;
  }
  if (text == "single") {
    return LbPolicy::Single;
  }
  throw std::invalid_argument("unknown lb policy: " + std::string(text));
}

RangeMode
parseRangeMode(std::string_view text)
{
  if (text == "bypass") {
    return RangeMode::Bypass;
  }
  if (text == "full_fetch") {
    return RangeMode::FullFetch;
  }
  throw std::invalid_argument("unknown range mode: " + std::string(text));
}

HttpProxy::HttpProxy(sim::Network& net, NodeId node, ProxyConfig config,
                     const ContentCatalog& catalog, TcpConfig tcp)
  : m_net(net)
  , m_stack(net, node, tcp)
  , m_config(std::move(config))
  , m_catalog(catalog)
  , m_cache(m_config.cacheEnabled ? m_config.cacheCapacity : 0)
{
  if (m_config.upstreams.empty()) {
    throw std::invalid_argument("proxy needs at least one upstream");
  }
  for (NodeId up : m_config.upstreams) {
    if (net.faceToward(node, up) == sim::INVALID_FACE) {
      throw std::invalid_argument("proxy upstream is not adjacent: " + net.nodeName(up));
    }
  }
  m_stack.setAcceptHandler([this] (TcpServerEnd& end) {
    end.setRequestHandler([this] (TcpServerEnd& e, const HttpRequest& r) { onRequest(e, r); });
    end.setAbortHandler([this] (TcpServerEnd& e, TcpFailure) { onDownstreamAbort(e); });
  });
}

void
HttpProxy::prewarm(TcpStack& upstream)
{
  m_pool[upstream.node()].push_back(&m_stack.connectEstablished(upstream));
}

TcpClientEnd&
HttpProxy::acquire(NodeId upstream)
{
  auto& conns = m_pool[upstream];
  for (TcpClientEnd* c : conns) {
    if (c->isIdle() && c->state() == TcpClientEnd::State::Established) {
      return *c;
    }
  }
  TcpClientEnd& c = m_stack.connect(upstream);
  conns.push_back(&c);
  return c;
}

void
HttpProxy::onRequest(TcpServerEnd& end, const HttpRequest& req)
{
  auto length = m_catalog.responseLength(req);
  if (!length) {
    ++m_counters.rejected;
    end.reject(m_catalog.sizeOf(req.url) ? "416 range not satisfiable" : "404 not found");
    return;
  }

  if (m_config.cacheEnabled && m_cache.lookup(req.url) != nullptr) {
    ++m_counters.cacheHits;
    end.respond(*length);
    end.supply(*length);
    return;
  }
  ++m_counters.cacheMisses;

  Fetch fetch;
  uint64_t offset = 0;
  if (req.range && m_config.rangeMode == RangeMode::Bypass) {
    fetch.request = req;
  }
  else {
    fetch.request = HttpRequest{req.url, std::nullopt, req.cacheable};
    fetch.store = m_config.cacheEnabled && req.cacheable;
    offset = req.range ? req.range->first : 0;
  }
  fetch.servings.push_back(Serving{&end, offset, *length});
  if (m_config.lbPolicy == LbPolicy::RoundRobin) {
    fetch.upstreamIndex = m_rrNext++ % m_config.upstreams.size();
  }

  auto it = m_fetches.insert(m_fetches.end(), std::move(fetch));
  m_servingIndex[&end] = it;
  startAttempt(it);
}

void
HttpProxy::startAttempt(FetchIter fetch)
{
  ++fetch->attempts;
  fetch->upstream = m_config.upstreams[fetch->upstreamIndex];
  m_lastUpstream = fetch->upstream;
  ++m_perUpstream[fetch->upstream];
  ++m_counters.upstreamRequests;

  fetch->conn = &acquire(fetch->upstream);
  fetch->conn->request(fetch->request, TcpClientEnd::ResponseHandlers{
    [this, fetch] (uint64_t len) { onUpstreamStart(fetch, len); },
    [this, fetch] (uint64_t bytes) { onUpstreamBytes(fetch, bytes); },
    [this, fetch] { onUpstreamComplete(fetch); },
    [this, fetch] (TcpFailure f, const std::string& why) { onUpstreamFailed(fetch, f, why); },
  });
}

void
HttpProxy::feed(Serving& s, uint64_t upstreamBytes)
{
  if (!s.started) {
    s.end->respond(s.length);
    s.started = true;
  }
  uint64_t avail = upstreamBytes > s.offset ? upstreamBytes - s.offset : 0;
  s.end->supply(std::min(avail, s.length));
}

void
HttpProxy::onUpstreamStart(FetchIter fetch, uint64_t length)
{
  fetch->started = true;
  fetch->length = length;
  for (auto& s : fetch->servings) {
    feed(s, 0);
  }
}

void
HttpProxy::onUpstreamBytes(FetchIter fetch, uint64_t bytes)
{
  fetch->received = bytes;
  for (auto& s : fetch->servings) {
    feed(s, bytes);
  }
}

void
HttpProxy::onUpstreamComplete(FetchIter fetch)
{
  if (fetch->store) {
    auto evicted = m_cache.insert(fetch->request.url, fetch->length, fetch->length);
    if (evicted) {
      ++m_counters.objectsCached;
      m_counters.bytesCached += fetch->length;
    }
  }
  for (auto& s : fetch->servings) {
    feed(s, fetch->length);
    m_servingIndex.erase(s.end);
  }
  m_fetches.erase(fetch);
}

void
HttpProxy::onUpstreamFailed(FetchIter fetch, TcpFailure, const std::string& reason)
{
  if (!fetch->started && fetch->attempts < 2 && m_config.upstreams.size() > 1) {
    ++m_counters.retries;
    fetch->upstreamIndex = (fetch->upstreamIndex + 1) % m_config.upstreams.size();
    startAttempt(fetch);
    return;
  }
  // partial bytes are dropped; nothing of this object is kept
  ++m_counters.failedTransfers;
  for (auto& s : fetch->servings) {
    m_servingIndex.erase(s.end);
    s.end->reject("502 upstream " + reason);
  }
  m_fetches.erase(fetch);
}

void
HttpProxy::onDownstreamAbort(TcpServerEnd& end)
{
  auto idx = m_servingIndex.find(&end);
  if (idx == m_servingIndex.end()) {
    return;
  }
  FetchIter fetch = idx->second;
  m_servingIndex.erase(idx);
  fetch->servings.remove_if([&end] (const Serving& s) { return s.end == &end; });
  if (!fetch->servings.empty() || (m_config.backgroundFill && fetch->store)) {
    return;
  }
  fetch->conn->abort();
  m_fetches.erase(fetch);
}

} // namespace ndncdn::http
