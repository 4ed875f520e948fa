#include "ndncdn/exp/experiments.hpp"

#include <boost/test/unit_test.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ndncdn::exp::tests {

namespace fs = std::filesystem;

namespace {

std::string
csvOf(const std::vector<MetricsRecord>& records)
{
  std::ostringstream os;
  writeCsv(os, records);
  return os.str();
}

std::string
slurp(const fs::path& p)
{
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

const MetricsRecord&
find(const std::vector<MetricsRecord>& recs, const std::string& plane, const std::string& mode)
{
  for (const auto& r : recs) {
    if (r.plane == plane && r.mode == mode) {
      return r;
    }
  }
  BOOST_FAIL("no record " + plane + " " + mode);
  return recs.front();
}

} // namespace

BOOST_AUTO_TEST_SUITE(TestExperiments)

BOOST_AUTO_TEST_CASE(SwitchSegments)
{
  auto cfg = defaultConfig(ExperimentId::C);
  // 10% of 100 MiB is 10485760 bytes, 1191.56 chunks of 8800
  BOOST_CHECK_EQUAL(switchSegments(cfg, 100 * MiB), 1192);
  cfg.switchFraction = 1.0;
  BOOST_CHECK_EQUAL(switchSegments(cfg, 100 * MiB), 11916);
}

BOOST_AUTO_TEST_CASE(CacheUtilizationAfterSwitch)
{
  auto cfg = defaultConfig(ExperimentId::C);
  cfg.sizes = {10 * MiB};
  cfg.repetitions = 1;
  auto recs = runExperiment(cfg);
  BOOST_REQUIRE_EQUAL(recs.size(), 2);

  const auto& n = find(recs, "ndn", "switch=0.10");
  BOOST_CHECK(n.success);
  // ceil(1048576 / 8800) segments through the first intermediate
  BOOST_CHECK_EQUAL(n.cache1Bytes, 120u * 8800);
  BOOST_CHECK_EQUAL(n.cache2Bytes, 10 * MiB);

  const auto& h = find(recs, "http", "switch=0.10");
  BOOST_CHECK(h.success);
  BOOST_CHECK_EQUAL(h.cache1Bytes, 10 * MiB);
  BOOST_CHECK_EQUAL(h.cache2Bytes, 10 * MiB);
}

BOOST_AUTO_TEST_CASE(FirstByteDeltaIsAccessRoundTrip)
{
  auto cfg = defaultConfig(ExperimentId::B);
  cfg.repetitions = 1;
  cfg.randomTopologies = 2;
  auto recs = runExperiment(cfg);
  for (int t = 0; t <= cfg.randomTopologies; ++t) {
    double access = toMs(randomizedTopology(cfg, t).access.delay);
    for (std::string phase : {"cold", "warm"}) {
      auto mode = phase + "-t" + std::to_string(t);
      const auto& n = find(recs, "ndn", mode);
      const auto& h = find(recs, "http", mode);
      BOOST_REQUIRE(n.ttfbMs && h.ttfbMs);
      BOOST_TEST_CONTEXT(mode) {
        BOOST_CHECK_CLOSE(*h.ttfbMs - *n.ttfbMs, 2 * access, 1e-6);
      }
    }
  }
  BOOST_CHECK_EQUAL(*find(recs, "ndn", "warm-t0").ttfbMs, 100.0);
  BOOST_CHECK_EQUAL(*find(recs, "ndn", "cold-t0").ttfbMs, 140.0);
}

BOOST_AUTO_TEST_CASE(RandomizedTopologiesAreReproducible)
{
  auto cfg = defaultConfig(ExperimentId::B);
  auto a = randomizedTopology(cfg, 3);
  auto b = randomizedTopology(cfg, 3);
  BOOST_CHECK(a.access.delay == b.access.delay);
  BOOST_CHECK(a.upstream[1].delay == b.upstream[1].delay);
  BOOST_CHECK(randomizedTopology(cfg, 0).access.delay == cfg.topology.access.delay);
}

BOOST_AUTO_TEST_CASE(EmptySizeListRunsNothing)
{
  auto cfg = parseConfig(R"({"experiment": "A", "sizes": []})");
  BOOST_CHECK_NO_THROW(validate(cfg));
  BOOST_CHECK(planRuns(cfg).empty());
  BOOST_CHECK(runExperiment(cfg).empty());
}

BOOST_AUTO_TEST_CASE(SameSeedSameOutput)
{
  auto cfg = defaultConfig(ExperimentId::A);
  cfg.sizes = {MiB};
  cfg.repetitions = 2;
  auto dir = fs::temp_directory_path() / "ndncdn-determinism";
  fs::remove_all(dir);
  fs::create_directories(dir / "one");
  fs::create_directories(dir / "two");

  auto one = runExperiment(cfg, {1, (dir / "one").string()});
  auto two = runExperiment(cfg, {2, (dir / "two").string()});
  BOOST_CHECK_EQUAL(csvOf(one), csvOf(two));

  size_t traces = 0;
  for (const auto& entry : fs::directory_iterator(dir / "one")) {
    auto other = dir / "two" / entry.path().filename();
    BOOST_REQUIRE(fs::exists(other));
    BOOST_CHECK(slurp(entry.path()) == slurp(other));
    BOOST_CHECK(fs::file_size(entry.path()) > 0);
    ++traces;
  }
  BOOST_CHECK_EQUAL(traces, planRuns(cfg).size());

  cfg.seed = 99;
  BOOST_CHECK_NE(csvOf(runExperiment(cfg)), csvOf(one));
  fs::remove_all(dir);
}

BOOST_AUTO_TEST_SUITE_END()

} // namespace ndncdn::exp::tests
