#include "ndncdn/sim/network.hpp"
#include "ndncdn/sim/topology.hpp"

#include <boost/test/unit_test.hpp>

#include <cmath>

namespace ndncdn::sim::tests {

namespace {

Packet
probe(uint64_t seq)
{
  TcpSegment s;
  s.kind = TcpSegment::Kind::Data;
  s.seq = seq;
  s.payload = 100;
  return s;
}

uint64_t
seqOf(const Packet& p)
{
  return std::get<TcpSegment>(p).seq;
}

struct TwoNodes
{
  explicit
  TwoNodes(LinkParams params, uint64_t seed = 1)
    : net(seed)
  {
    a = net.addNode("a");
    b = net.addNode("b");
    link = net.addLink(a, b, params);
    net.setHandler(b, [this] (FaceId face, const Packet& p) {
      BOOST_CHECK_EQUAL(face, 1);
      arrivals.emplace_back(net.now(), seqOf(p));
    });
  }

  Network net;
  NodeId a;
  NodeId b;
  LinkId link;
  std::vector<std::pair<Time, uint64_t>> arrivals;
};

} // namespace

BOOST_AUTO_TEST_SUITE(TestNetwork)

BOOST_AUTO_TEST_CASE(LosslessArrivesAfterDelay)
{
  TwoNodes t({10ms, 0.0, {}});
  t.net.scheduler().schedule(3ms, [&] { t.net.send(t.a, 1, probe(1)); });
  t.net.scheduler().run();
  BOOST_REQUIRE_EQUAL(t.arrivals.size(), 1);
  BOOST_CHECK(t.arrivals[0].first == 13ms);
  BOOST_CHECK_EQUAL(t.net.link(t.link).stats(0).delivered, 1);
}

BOOST_AUTO_TEST_CASE(TotalLoss)
{
  TwoNodes t({10ms, 1.0, {}});
  for (uint64_t i = 0; i < 1000; ++i) {
    t.net.send(t.a, 1, probe(i));
  }
  t.net.scheduler().run();
  BOOST_CHECK(t.arrivals.empty());
  BOOST_CHECK_EQUAL(t.net.link(t.link).stats(0).lost, 1000);
}

BOOST_AUTO_TEST_CASE(EmpiricalLossRate)
{
  // binomial: n=1e6, p=8e-4 gives sd ~ 28 around 800, so +-10% is ~2.8 sd
  const double p = 0.0008;
  const uint64_t n = 1000000;
  TwoNodes t({1ms, p, {}}, 2024);
  for (uint64_t i = 0; i < n; ++i) {
    t.net.send(t.a, 1, probe(i));
  }
  t.net.scheduler().run();
  double rate = static_cast<double>(t.net.link(t.link).stats(0).lost) / n;
  BOOST_CHECK_LE(std::abs(rate - p), 0.1 * p);
  BOOST_CHECK_EQUAL(t.arrivals.size() + t.net.link(t.link).stats(0).lost, n);
}

BOOST_AUTO_TEST_CASE(FifoAcrossDelayDecrease)
{
  TwoNodes t({50ms, 0.0, {}});
  t.net.send(t.a, 1, probe(1));
  t.net.changeLink(t.link, 5ms, 0.0);
  t.net.send(t.a, 1, probe(2));
  t.net.scheduler().run();
  BOOST_REQUIRE_EQUAL(t.arrivals.size(), 2);
  BOOST_CHECK_EQUAL(t.arrivals[0].second, 1);
  BOOST_CHECK_EQUAL(t.arrivals[1].second, 2);
  BOOST_CHECK(t.arrivals[0].first == 50ms);
  BOOST_CHECK(t.arrivals[1].first >= t.arrivals[0].first);
}

BOOST_AUTO_TEST_CASE(InFlightKeepsOldDelay)
{
  TwoNodes t({50ms, 0.0, {}});
  t.net.send(t.a, 1, probe(1));
  t.net.changeLinkAt(10ms, t.link, 100ms, 0.0);
  t.net.scheduler().schedule(20ms, [&] { t.net.send(t.a, 1, probe(2)); });
  t.net.scheduler().run();
  BOOST_REQUIRE_EQUAL(t.arrivals.size(), 2);
  BOOST_CHECK(t.arrivals[0].first == 50ms);
  BOOST_CHECK(t.arrivals[1].first == 120ms);
}

BOOST_AUTO_TEST_CASE(SerializationDelay)
{
  TwoNodes t({10ms, 0.0, 100.0});
  t.net.send(t.a, 1, probe(1));
  t.net.send(t.a, 1, probe(2));
  t.net.scheduler().run();
  BOOST_REQUIRE_EQUAL(t.arrivals.size(), 2);
  BOOST_CHECK(t.arrivals[0].first == 11ms);
  BOOST_CHECK(t.arrivals[1].first == 12ms);
}

BOOST_AUTO_TEST_CASE(KillDropsArrivalsAndTimers)
{
  TwoNodes t({10ms, 0.0, {}});
  bool fired = false;
  t.net.schedule(t.b, 20ms, [&] { fired = true; });
  t.net.send(t.a, 1, probe(1));
  t.net.killNodeAt(5ms, t.b);
  std::vector<LinkId> notified;
  t.net.addLinkStateListener([&] (LinkId l) { notified.push_back(l); });
  t.net.scheduler().run();
  BOOST_CHECK(t.arrivals.empty());
  BOOST_CHECK(!fired);
  BOOST_CHECK(!t.net.isAlive(t.b));
  BOOST_CHECK_EQUAL(t.net.deadDrops(), 1);
  BOOST_CHECK(!t.net.isFaceUsable(t.a, 1));
  BOOST_REQUIRE_EQUAL(notified.size(), 1);
  BOOST_CHECK_EQUAL(notified[0], t.link);
}

BOOST_AUTO_TEST_CASE(LinkDown)
{
  TwoNodes t({10ms, 0.0, {}});
  t.net.setLinkUp(t.link, false);
  t.net.send(t.a, 1, probe(1));
  t.net.scheduler().run();
  BOOST_CHECK(t.arrivals.empty());
  BOOST_CHECK_EQUAL(t.net.link(t.link).stats(0).downDrops, 1);
  BOOST_CHECK_EQUAL(t.net.link(t.link).stats(0).lost, 0);
}

BOOST_AUTO_TEST_CASE(InvalidConfig)
{
  Network net;
  auto a = net.addNode("a");
  BOOST_CHECK_THROW(net.addNode("a"), Network::Error);
  BOOST_CHECK_THROW(net.addLink(a, a, {}), Network::Error);
  BOOST_CHECK_THROW(net.addLink(a, 9, {}), Network::Error);
  auto b = net.addNode("b");
  BOOST_CHECK_THROW(net.addLink(a, b, {10ms, 1.5, {}}), Network::Error);
  BOOST_CHECK_THROW(net.addLink(a, b, {-1ms, 0.0, {}}), Network::Error);
}

BOOST_AUTO_TEST_CASE(PerDirectionDrawsIndependentOfOtherTraffic)
{
  auto lossPattern = [] (bool extraTraffic) {
    Network net(5);
    auto a = net.addNode("a");
    auto b = net.addNode("b");
    auto c = net.addNode("c");
    net.addLink(a, b, {1ms, 0.3, {}});
    net.addLink(a, c, {1ms, 0.3, {}});
    std::vector<uint64_t> got;
    net.setHandler(b, [&] (FaceId, const Packet& p) { got.push_back(seqOf(p)); });
    for (uint64_t i = 0; i < 200; ++i) {
      net.send(a, 1, probe(i));
      if (extraTraffic) {
        net.send(a, 2, probe(i));
        net.send(b, 1, probe(i));
      }
    }
    net.scheduler().run();
    return got;
  };
  BOOST_TEST(lossPattern(false) == lossPattern(true), boost::test_tools::per_element());
}

BOOST_AUTO_TEST_CASE(DefaultTopology)
{
  Network net;
  auto topo = buildCdnTopology(net, TopologyConfig{});
  BOOST_CHECK_EQUAL(net.nodeName(topo.client), "client");
  BOOST_CHECK(net.link(topo.accessLink).params().delay == 50ms);
  BOOST_REQUIRE_EQUAL(topo.intermediates.size(), 2);
  BOOST_REQUIRE_EQUAL(topo.origins.size(), 2);
  for (size_t i = 0; i < 2; ++i) {
    BOOST_CHECK(net.link(topo.upstreamLinks[i]).params().delay == 10ms);
    BOOST_CHECK(net.link(topo.originLinks[i][0]).params().delay == 10ms);
    BOOST_CHECK(net.link(topo.originLinks[i][1]).params().delay == 50ms);
  }
  BOOST_CHECK_EQUAL(net.faceToward(topo.clientSideCache, topo.client), 1);
  BOOST_CHECK_EQUAL(net.faceToward(topo.clientSideCache, topo.intermediates[0]), 2);
  BOOST_CHECK_EQUAL(net.faceToward(topo.clientSideCache, topo.intermediates[1]), 3);
}

BOOST_AUTO_TEST_SUITE_END()

} // namespace ndncdn::sim::tests
