#include "ndncdn/ndn/consumer.hpp"
#include "ndncdn/ndn/producer.hpp"
#include "ndncdn/sim/topology.hpp"

#include <boost/test/unit_test.hpp>

namespace ndncdn::ndn::tests {

using sim::Network;

BOOST_AUTO_TEST_SUITE(TestConsumer)

BOOST_AUTO_TEST_CASE(StopAndWaitTimeline)
{
  // window 1 over one 10ms link: every segment costs one 20ms round trip
  Network net;
  auto a = net.addNode("a");
  auto b = net.addNode("b");
  net.addLink(a, b, {10ms, 0.0, {}});
  Forwarder fa(net, a, ForwarderConfig{.csEnabled = false});
  Forwarder fb(net, b, ForwarderConfig{.csEnabled = false});
  Producer p(fb);
  const uint64_t segments = 7;
  p.publish({Name("/f"), segments * 8800 - 5, 8800});
  fa.addRoute(Name("/f"), 1);

  ConsumerConfig cfg;
  cfg.window = 1;
  Consumer consumer(net, fa, cfg, 1);
  bool done = false;
  consumer.fetch(Name("/f"), std::nullopt, [&] (const RetrievalResult& r) {
    done = true;
    BOOST_CHECK(r.success);
  });
  net.scheduler().run();

  BOOST_REQUIRE(done);
  const auto& r = consumer.result();
  BOOST_REQUIRE(r.ttfb);
  BOOST_CHECK(*r.ttfb == 20ms);
  BOOST_CHECK(r.completion == Time(segments * 20ms));
  BOOST_CHECK_EQUAL(r.deliveredBytes, segments * 8800 - 5);
  BOOST_CHECK_EQUAL(r.segmentsDelivered, segments);
  BOOST_CHECK_EQUAL(r.retransmissions, 0);
  for (size_t i = 0; i < r.arrivals.size(); ++i) {
    BOOST_CHECK(r.arrivals[i].time == Time((i + 1) * 20ms));
  }
}

BOOST_AUTO_TEST_CASE(EmptyRange)
{
  Network net;
  auto a = net.addNode("a");
  auto b = net.addNode("b");
  net.addLink(a, b, {10ms, 0.0, {}});
  Forwarder fa(net, a);
  fa.addRoute(Name("/f"), 1);
  Consumer consumer(net, fa, {}, 1);
  bool done = false;
  consumer.fetch(Name("/f"), ByteRange{10, 9}, [&] (const RetrievalResult& r) {
    done = true;
    BOOST_CHECK(r.success);
    BOOST_CHECK_EQUAL(r.deliveredBytes, 0);
    BOOST_CHECK(r.interests.empty());
  });
  net.scheduler().run();
  BOOST_CHECK(done);
  BOOST_CHECK_EQUAL(fa.counters().interestsIn, 0);
}

BOOST_AUTO_TEST_CASE(CachedRangeNeverReachesOrigin)
{
  Network net;
  auto topo = sim::buildCdnTopology(net, {});
  Forwarder client(net, topo.client, ForwarderConfig{.csEnabled = false});
  Forwarder csc(net, topo.clientSideCache);
  Forwarder int1(net, topo.intermediates[0]);
  Forwarder origin(net, topo.origins[0], ForwarderConfig{.csEnabled = false});
  Producer producer(origin);
  ContentObject content{Name("/f"), 20 * 8800, 8800};
  producer.publish(content);
  client.addRoute(Name("/f"), 1);
  csc.addRoute(Name("/f"), 2);
  int1.addRoute(Name("/f"), net.faceToward(topo.intermediates[0], topo.origins[0]));

  Consumer consumer(net, client, {}, 1);
  consumer.fetch(Name("/f"), std::nullopt, [] (const RetrievalResult& r) {
    BOOST_CHECK(r.success);
  });
  net.scheduler().run();
  BOOST_CHECK_EQUAL(producer.served(), 20);

  consumer.fetch(Name("/f"), ByteRange{0, 10 * 8800 - 1}, [] (const RetrievalResult& r) {
    BOOST_CHECK(r.success);
    BOOST_CHECK_EQUAL(r.segmentsDelivered, 10);
    BOOST_CHECK_EQUAL(r.interests.size(), 10);
  });
  net.scheduler().run();
  BOOST_CHECK_EQUAL(producer.served(), 20);
  BOOST_CHECK(*consumer.result().ttfb == 100ms);
}

BOOST_AUTO_TEST_CASE(RangeSelectsOverlappingSegments)
{
  Network net;
  auto a = net.addNode("a");
  auto b = net.addNode("b");
  net.addLink(a, b, {10ms, 0.0, {}});
  Forwarder fa(net, a);
  Forwarder fb(net, b);
  Producer p(fb);
  p.publish({Name("/f"), 10 * 8800, 8800});
  fa.addRoute(Name("/f"), 1);
  Consumer consumer(net, fa, {}, 1);
  consumer.fetch(Name("/f"), ByteRange{8799, 8800 * 3}, [] (const RetrievalResult&) {});
  net.scheduler().run();
  const auto& r = consumer.result();
  BOOST_CHECK(r.success);
  BOOST_REQUIRE_EQUAL(r.interests.size(), 4);
  BOOST_CHECK_EQUAL(r.interests.front().segment, 1);
  BOOST_CHECK_EQUAL(r.interests.back().segment, 4);
  BOOST_CHECK_EQUAL(p.served(), 4);
}

BOOST_AUTO_TEST_CASE(RetransmissionsServedByNearCache)
{
  // lossy access link; retransmitted Interests must not travel past the first cache
  sim::TopologyConfig tc;
  tc.access.loss = 0.05;
  Network net(11);
  auto topo = sim::buildCdnTopology(net, tc);
  Forwarder client(net, topo.client, ForwarderConfig{.csEnabled = false});
  Forwarder csc(net, topo.clientSideCache);
  Forwarder int1(net, topo.intermediates[0]);
  Forwarder origin(net, topo.origins[0], ForwarderConfig{.csEnabled = false});
  Producer producer(origin);
  producer.publish({Name("/f"), 300 * 8800, 8800});
  client.addRoute(Name("/f"), 1);
  csc.addRoute(Name("/f"), 2);
  int1.addRoute(Name("/f"), net.faceToward(topo.intermediates[0], topo.origins[0]));

  Consumer consumer(net, client, {}, 5);
  consumer.fetch(Name("/f"), std::nullopt, [] (const RetrievalResult&) {});
  net.scheduler().run();
  BOOST_CHECK(consumer.result().success);
  BOOST_CHECK_GT(consumer.result().retransmissions, 0);
  BOOST_CHECK_EQUAL(producer.served(), 300);
  BOOST_CHECK_EQUAL(int1.counters().interestsIn, 300);
}

BOOST_AUTO_TEST_CASE(GivesUpAfterMaxRetries)
{
  Network net;
  auto a = net.addNode("a");
  auto b = net.addNode("b");
  net.addLink(a, b, {10ms, 1.0, {}});
  Forwarder fa(net, a, ForwarderConfig{.csEnabled = false});
  fa.addRoute(Name("/f"), 1);
  ConsumerConfig cfg;
  cfg.maxRetries = 2;
  Consumer consumer(net, fa, cfg, 1);
  consumer.fetch(Name("/f"), std::nullopt, [] (const RetrievalResult&) {});
  net.scheduler().run();
  const auto& r = consumer.result();
  BOOST_CHECK(!r.success);
  BOOST_CHECK_EQUAL(r.interests.size(), 3);
  BOOST_REQUIRE(r.failedSegment);
  BOOST_CHECK_EQUAL(*r.failedSegment, 1);
  BOOST_CHECK_EQUAL(r.deliveredBytes, 0);
}

BOOST_AUTO_TEST_SUITE_END()

} // namespace ndncdn::ndn::tests
