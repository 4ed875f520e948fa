#include "ndncdn/sim/rng.hpp"
#include "ndncdn/sim/scheduler.hpp"

#include <boost/test/unit_test.hpp>

#include <algorithm>

namespace ndncdn::sim::tests {

BOOST_AUTO_TEST_SUITE(TestScheduler)

BOOST_AUTO_TEST_CASE(EqualTimeKeepsScheduleOrder)
{
  Scheduler s;
  std::vector<int> order;
  s.schedule(5ms, [&] { order.push_back(1); });
  s.schedule(5ms, [&] { order.push_back(2); });
  s.schedule(1ms, [&] { order.push_back(0); });
  s.run();
  BOOST_TEST(order == (std::vector<int>{0, 1, 2}), boost::test_tools::per_element());
}

BOOST_AUTO_TEST_CASE(EmptyQueue)
{
  Scheduler s;
  s.runUntil(10ms);
  BOOST_CHECK(s.now() == 10ms);
  BOOST_CHECK_EQUAL(s.executedCount(), 0);
  BOOST_CHECK(s.empty());
}

BOOST_AUTO_TEST_CASE(PastIsRejected)
{
  Scheduler s;
  s.runUntil(10ms);
  BOOST_CHECK_THROW(s.schedule(9ms, [] {}), Scheduler::Error);
  BOOST_CHECK_NO_THROW(s.schedule(10ms, [] {}));
}

BOOST_AUTO_TEST_CASE(RunUntilBoundary)
{
  Scheduler s;
  int ran = 0;
  s.schedule(10ms, [&] { ++ran; });
  s.schedule(11ms, [&] { ++ran; });
  s.runUntil(10ms);
  BOOST_CHECK_EQUAL(ran, 1);
  BOOST_CHECK(!s.empty());
  s.run();
  BOOST_CHECK_EQUAL(ran, 2);
}

BOOST_AUTO_TEST_CASE(Cancel)
{
  Scheduler s;
  int ran = 0;
  auto a = s.schedule(1ms, [&] { ++ran; });
  s.schedule(2ms, [&] { ++ran; });
  s.cancel(a);
  s.cancel(a);
  s.cancel(12345);
  s.run();
  BOOST_CHECK_EQUAL(ran, 1);
  BOOST_CHECK(s.empty());
}

BOOST_AUTO_TEST_CASE(EventsScheduledFromEvents)
{
  Scheduler s;
  std::vector<Time> times;
  s.schedule(1ms, [&] {
    times.push_back(s.now());
    s.scheduleIn(0ms, [&] { times.push_back(s.now()); });
    s.scheduleIn(3ms, [&] { times.push_back(s.now()); });
  });
  s.run();
  BOOST_REQUIRE_EQUAL(times.size(), 3);
  BOOST_CHECK(times[1] == 1ms);
  BOOST_CHECK(times[2] == 4ms);
}

BOOST_AUTO_TEST_CASE(MillionRandomEvents)
{
  Scheduler s;
  Rng rng(42);
  struct Logged
  {
    Time time;
    size_t index;
  };
  std::vector<Logged> log;
  std::vector<size_t> executed;
  const size_t n = 1000000;
  log.reserve(n);
  executed.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    Time t(static_cast<int64_t>(rng.below(10000)));
    log.push_back({t, i});
    s.schedule(t, [&executed, i] { executed.push_back(i); });
  }
  s.run();

  // oracle: stable sort of the schedule log by time
  std::stable_sort(log.begin(), log.end(),
                   [] (const Logged& a, const Logged& b) { return a.time < b.time; });
  BOOST_REQUIRE_EQUAL(executed.size(), n);
  for (size_t i = 0; i < n; ++i) {
    BOOST_REQUIRE_EQUAL(executed[i], log[i].index);
  }
}

BOOST_AUTO_TEST_CASE(TraceFormat)
{
  BOOST_CHECK_EQUAL(formatTraceLine({1500us, "csc", "recv", "interest /a"}),
                    "1.500\tcsc\trecv\tinterest /a");

  Scheduler s;
  std::vector<std::string> lines;
  s.setTraceSink([&] (const TraceRecord& r) { lines.push_back(formatTraceLine(r)); });
  s.schedule(2ms, [] {}, "client", "timer", "rto");
  s.run();
  BOOST_REQUIRE_EQUAL(lines.size(), 1);
  BOOST_CHECK_EQUAL(lines[0], "2.000\tclient\ttimer\trto");
}

BOOST_AUTO_TEST_SUITE_END()

BOOST_AUTO_TEST_SUITE(TestRng)

BOOST_AUTO_TEST_CASE(StreamsAreIndependentAndRepeatable)
{
  Rng a(7, {1, 2});
  Rng b(7, {1, 2});
  Rng c(7, {1, 3});
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    auto x = a.next();
    BOOST_REQUIRE_EQUAL(x, b.next());
    differs = differs || x != c.next();
  }
  BOOST_CHECK(differs);
}

BOOST_AUTO_TEST_CASE(Ranges)
{
  Rng r(3);
  for (int i = 0; i < 10000; ++i) {
    double u = r.uniform01();
    BOOST_REQUIRE(u >= 0.0 && u < 1.0);
    BOOST_REQUIRE_LT(r.below(7), 7);
    double v = r.uniform(50, 200);
    BOOST_REQUIRE(v >= 50 && v < 200);
  }
  BOOST_CHECK(!r.bernoulli(0.0));
  BOOST_CHECK(r.bernoulli(1.0));
}

BOOST_AUTO_TEST_SUITE_END()

} // namespace ndncdn::sim::tests
