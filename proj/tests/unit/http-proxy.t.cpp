#include "ndncdn/http/client.hpp"
#include "ndncdn/http/origin.hpp"
#include "ndncdn/http/proxy.hpp"
#include "ndncdn/sim/topology.hpp"

#include <boost/test/unit_test.hpp>

namespace ndncdn::http::tests {

using sim::Network;

namespace {

constexpr uint64_t MiB = 1 << 20;

/// client -> csc (forward, two upstreams) -> int1/int2 (reverse) -> origin1
struct Hierarchy
{
  explicit
  Hierarchy(sim::TopologyConfig tc = {}, RangeMode mode = RangeMode::Bypass,
            bool cscCache = true, bool prewarm = false, uint64_t seed = 1)
    : net(seed)
    , topo(sim::buildCdnTopology(net, tc))
  {
    catalog.add("/f", 100 * MiB);
    catalog.add("/g", 3 * MiB);
    for (int i = 0; i < 20; ++i) {
      catalog.add("/obj" + std::to_string(i), 20000);
    }
    origin = std::make_unique<HttpOrigin>(net, topo.origins[0], catalog);
    for (NodeId n : topo.intermediates) {
      ProxyConfig pc;
      pc.upstreams = {topo.origins[0]};
      pc.lbPolicy = LbPolicy::Single;
      pc.rangeMode = mode;
      intermediates.push_back(std::make_unique<HttpProxy>(net, n, pc, catalog));
    }
    ProxyConfig pc;
    pc.role = ProxyRole::Forward;
    pc.upstreams = topo.intermediates;
    pc.rangeMode = mode;
    pc.cacheEnabled = cscCache;
    csc = std::make_unique<HttpProxy>(net, topo.clientSideCache, pc, catalog);
    client = std::make_unique<HttpClient>(net, topo.client, topo.clientSideCache);
    if (prewarm) {
      for (auto& i : intermediates) {
        csc->prewarm(i->stack());
        i->prewarm(origin->stack());
      }
    }
  }

  HttpResult
  get(HttpRequest req, std::optional<uint64_t> abortAfter = std::nullopt)
  {
    client->get(req, abortAfter, [] (const HttpResult&) {});
    net.scheduler().run();
    return client->result();
  }

  Network net;
  sim::CdnTopology topo;
  ContentCatalog catalog;
  std::unique_ptr<HttpOrigin> origin;
  std::vector<std::unique_ptr<HttpProxy>> intermediates;
  std::unique_ptr<HttpProxy> csc;
  std::unique_ptr<HttpClient> client;
};

} // namespace

BOOST_AUTO_TEST_SUITE(TestHttpProxy)

BOOST_AUTO_TEST_CASE(ColdGetPopulatesBothTiers)
{
  Hierarchy h;
  auto r = h.get({"/g", std::nullopt, true});
  BOOST_CHECK(r.success);
  BOOST_CHECK_EQUAL(r.deliveredBytes, 3 * MiB);
  BOOST_CHECK_EQUAL(h.origin->touches(), 1);
  BOOST_CHECK(h.csc->isCached("/g"));
  BOOST_CHECK(h.intermediates[0]->isCached("/g"));
  BOOST_CHECK_EQUAL(h.csc->cacheUsed(), 3 * MiB);
}

BOOST_AUTO_TEST_CASE(WarmTtfbIsHandshakePlusRoundTrip)
{
  // connect 0..100, request 100..150, first byte back at 200
  Hierarchy h;
  h.get({"/g", std::nullopt, true});
  auto r = h.get({"/g", std::nullopt, true});
  BOOST_CHECK(r.success);
  BOOST_CHECK(*r.ttfb == 200ms);
  BOOST_CHECK_EQUAL(h.origin->touches(), 1);
  BOOST_CHECK_EQUAL(h.csc->counters().cacheHits, 1);
}

BOOST_AUTO_TEST_CASE(ColdTtfbWithPrewarmedUpstreams)
{
  // 150ms to reach csc, then 20ms + 20ms of upstream round trips, then 50ms back
  Hierarchy h({}, RangeMode::Bypass, true, true);
  auto r = h.get({"/g", std::nullopt, true});
  BOOST_CHECK(r.success);
  BOOST_CHECK(*r.ttfb == 240ms);
}

BOOST_AUTO_TEST_CASE(ColdTtfbWithoutPrewarmPaysEveryHandshake)
{
  Hierarchy h;
  auto r = h.get({"/g", std::nullopt, true});
  BOOST_CHECK(*r.ttfb == 280ms);
}

BOOST_AUTO_TEST_CASE(RoundRobinAlternates)
{
  Hierarchy h;
  h.get({"/obj0", std::nullopt, true});
  h.get({"/obj1", std::nullopt, true});
  BOOST_CHECK_EQUAL(h.csc->upstreamRequests().at(h.topo.intermediates[0]), 1);
  BOOST_CHECK_EQUAL(h.csc->upstreamRequests().at(h.topo.intermediates[1]), 1);
}

BOOST_AUTO_TEST_CASE(RoundRobinFairness)
{
  Hierarchy h;
  const int k = 10;
  for (int i = 0; i < 2 * k; ++i) {
    BOOST_REQUIRE(h.get({"/obj" + std::to_string(i), std::nullopt, true}).success);
  }
  BOOST_CHECK_EQUAL(h.csc->upstreamRequests().at(h.topo.intermediates[0]), k);
  BOOST_CHECK_EQUAL(h.csc->upstreamRequests().at(h.topo.intermediates[1]), k);
  BOOST_CHECK_EQUAL(h.intermediates[0]->counters().cacheMisses, k);
}

BOOST_AUTO_TEST_CASE(BypassReachesOriginEveryTime)
{
  Hierarchy h({}, RangeMode::Bypass);
  for (int i = 0; i < 10; ++i) {
    auto r = h.get({"/f", ByteRange{0, MiB - 1}, true});
    BOOST_REQUIRE(r.success);
    BOOST_CHECK_EQUAL(r.deliveredBytes, MiB);
  }
  BOOST_CHECK_EQUAL(h.origin->touches(), 10);
  BOOST_CHECK_EQUAL(h.csc->cacheUsed(), 0);
  BOOST_CHECK_EQUAL(h.intermediates[0]->cacheUsed(), 0);
}

BOOST_AUTO_TEST_CASE(FullFetchIngestsWholeObject)
{
  Hierarchy h({}, RangeMode::FullFetch);
  auto r = h.get({"/f", ByteRange{0, MiB - 1}, true});
  BOOST_CHECK(r.success);
  BOOST_CHECK_EQUAL(r.deliveredBytes, MiB);
  BOOST_CHECK_EQUAL(h.intermediates[0]->cacheUsed(), 100 * MiB);
  BOOST_CHECK_EQUAL(h.csc->cacheUsed(), 100 * MiB);
  BOOST_CHECK_EQUAL(h.origin->touches(), 1);

  auto again = h.get({"/f", ByteRange{5 * MiB, 6 * MiB - 1}, true});
  BOOST_CHECK(again.success);
  BOOST_CHECK_EQUAL(h.origin->touches(), 1);
  BOOST_CHECK_EQUAL(h.csc->counters().cacheHits, 1);
}

BOOST_AUTO_TEST_CASE(RangeOfWholeObjectSameInBothModes)
{
  Hierarchy bypass({}, RangeMode::Bypass);
  Hierarchy full({}, RangeMode::FullFetch);
  HttpRequest req{"/g", ByteRange{0, 3 * MiB - 1}, true};
  auto a = bypass.get(req);
  auto b = full.get(req);
  BOOST_CHECK(a.success && b.success);
  BOOST_CHECK_EQUAL(a.deliveredBytes, b.deliveredBytes);
  BOOST_CHECK(*a.ttfb == *b.ttfb);
  BOOST_CHECK(a.completion == b.completion);
  BOOST_CHECK_EQUAL(bypass.csc->cacheUsed(), 0);
  BOOST_CHECK_EQUAL(full.csc->cacheUsed(), 3 * MiB);
}

BOOST_AUTO_TEST_CASE(InvalidRangeRejectedAtFirstProxy)
{
  Hierarchy h;
  auto r = h.get({"/g", ByteRange{0, 3 * MiB}, true});
  BOOST_CHECK(!r.success);
  BOOST_CHECK(r.failure.find("416") != std::string::npos);
  BOOST_CHECK_EQUAL(h.csc->counters().rejected, 1);
  BOOST_CHECK_EQUAL(h.origin->touches(), 0);
  BOOST_CHECK(h.intermediates[0]->upstreamRequests().empty());
}

BOOST_AUTO_TEST_CASE(UpstreamDeathMidTransfer)
{
  Hierarchy h({}, RangeMode::Bypass, true, true);
  h.net.killNodeAt(1s, h.topo.intermediates[0]);
  auto r = h.get({"/f", std::nullopt, true});
  BOOST_CHECK(!r.success);
  BOOST_CHECK_GT(r.deliveredBytes, 0);
  BOOST_CHECK_LT(r.deliveredBytes, 100 * MiB);
  BOOST_CHECK_EQUAL(h.csc->cacheUsed(), 0);
  BOOST_CHECK_EQUAL(h.csc->counters().failedTransfers, 1);
  BOOST_CHECK_EQUAL(h.csc->counters().retries, 0);
}

BOOST_AUTO_TEST_CASE(RetryNextUpstreamBeforeFirstByte)
{
  Hierarchy h;
  h.net.killNode(h.topo.intermediates[0]);
  auto r = h.get({"/g", std::nullopt, true});
  BOOST_CHECK(r.success);
  BOOST_CHECK_EQUAL(h.csc->counters().retries, 1);
  BOOST_CHECK(h.intermediates[1]->isCached("/g"));
}

BOOST_AUTO_TEST_CASE(BackgroundFillAfterClientAbort)
{
  Hierarchy h({}, RangeMode::Bypass, false);
  auto r = h.get({"/f", std::nullopt, true}, 10 * MiB);
  BOOST_CHECK(r.aborted);
  BOOST_CHECK_GE(r.deliveredBytes, 10 * MiB);
  BOOST_CHECK_EQUAL(h.intermediates[0]->cacheUsed(), 100 * MiB);
  BOOST_CHECK_EQUAL(h.csc->cacheUsed(), 0);

  auto full = h.get({"/f", std::nullopt, true});
  BOOST_CHECK(full.success);
  BOOST_CHECK_EQUAL(h.intermediates[1]->cacheUsed(), 100 * MiB);
  BOOST_CHECK_EQUAL(h.origin->touches(), 2);
}

BOOST_AUTO_TEST_CASE(CacheBudgetNeverExceeded)
{
  sim::TopologyConfig tc;
  Network net(3);
  auto topo = sim::buildCdnTopology(net, tc);
  ContentCatalog cat;
  sim::Rng rng(17);
  for (int i = 0; i < 30; ++i) {
    cat.add("/o" + std::to_string(i), 1000 + rng.below(200000));
  }
  HttpOrigin origin(net, topo.intermediates[0], cat);
  ProxyConfig pc;
  pc.upstreams = {topo.intermediates[0]};
  pc.cacheCapacity = 500000;
  HttpProxy csc(net, topo.clientSideCache, pc, cat);
  HttpClient client(net, topo.client, topo.clientSideCache);
  for (int i = 0; i < 100; ++i) {
    client.get({"/o" + std::to_string(rng.below(30)), std::nullopt, true}, std::nullopt,
               [] (const HttpResult&) {});
    net.scheduler().run();
    BOOST_REQUIRE(client.result().success);
    BOOST_REQUIRE_LE(csc.cacheUsed(), 500000);
  }
  BOOST_CHECK_GT(csc.counters().cacheHits, 0);
}

BOOST_AUTO_TEST_SUITE_END()

} // namespace ndncdn::http::tests
