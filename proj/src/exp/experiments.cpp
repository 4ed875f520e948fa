#include "ndncdn/exp/experiments.hpp"
#include "ndncdn/exp/testbed.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <set>
#include <thread>

namespace ndncdn::exp {

using sim::FaceId;
using sim::NodeId;

const std::vector<ExperimentInfo>&
experimentCatalog()
{
  static const std::vector<ExperimentInfo> catalog{
    {ExperimentId::A, "goodput under loss",
     "completion time per object size, lossless vs lossy links, NDN vs HTTP"},
    {ExperimentId::B, "time to first byte",
     "TTFB with the object cached at the client-side cache (warm) or only at the origin (cold)"},
    {ExperimentId::C, "cache utilization",
     "intermediate cache bytes after switching upstream mid-transfer, then re-fetching"},
    {ExperimentId::D, "partial retrieval",
     "byte-range completion time and origin touches with a partially warm cache"},
    {ExperimentId::E, "transparent failover",
     "serving intermediate killed mid-transfer; delivery continuity and packet gaps"},
    {ExperimentId::F, "path switching",
     "active upstream degraded mid-transfer; chosen-upstream series per strategy interval"},
  };
  return catalog;
}

uint64_t
repetitionSeed(const ScenarioConfig& cfg, int rep)
{
  return cfg.seed + static_cast<uint64_t>(rep);
}

sim::TopologyConfig
losslessTopology(const sim::TopologyConfig& topo)
{
  auto out = topo;
  out.access.loss = 0.0;
  for (auto& l : out.upstream) {
    l.loss = 0.0;
  }
  for (auto& l : out.origin) {
    l.loss = 0.0;
  }
  return out;
}

sim::TopologyConfig
lossyTopology(const ScenarioConfig& cfg)
{
  auto out = cfg.topology;
  out.access.loss = cfg.lossProfile.access;
  for (auto& l : out.upstream) {
    l.loss = cfg.lossProfile.upstream;
  }
  for (auto& l : out.origin) {
    l.loss = cfg.lossProfile.origin;
  }
  return out;
}

sim::TopologyConfig
randomizedTopology(const ScenarioConfig& cfg, int index)
{
  auto out = cfg.topology;
  if (index == 0) {
    return out;
  }
  sim::Rng rng(cfg.seed, {0x746f706f, static_cast<uint64_t>(index)});
  auto ms = [&] (uint64_t lo, uint64_t hi) { return Time((lo + rng.below(hi - lo + 1)) * 1000); };
  out.access.delay = ms(5, 100);
  for (auto& l : out.upstream) {
    l.delay = ms(2, 50);
  }
  for (auto& l : out.origin) {
    l.delay = ms(2, 100);
  }
  return out;
}

uint64_t
switchSegments(const ScenarioConfig& cfg, uint64_t objectSize)
{
  auto bytes = static_cast<uint64_t>(std::llround(cfg.switchFraction * static_cast<double>(objectSize)));
  uint64_t segs = (bytes + cfg.ndn.chunkSize - 1) / cfg.ndn.chunkSize;
  uint64_t total = (objectSize + cfg.ndn.chunkSize - 1) / cfg.ndn.chunkSize;
  return std::min(segs, total);
}

namespace {

constexpr const char* NDN = "ndn";
constexpr const char* HTTP = "http";

MetricsRecord
baseRecord(const ScenarioConfig& cfg, const char* plane, uint64_t size, std::string mode,
           uint64_t seed)
{
  MetricsRecord r;
  r.experiment = static_cast<char>(cfg.experiment);
  r.plane = plane;
  r.sizeBytes = size;
  r.mode = std::move(mode);
  r.seed = seed;
  return r;
}

void
fillCaches(MetricsRecord& r, std::map<std::string, uint64_t> caches)
{
  r.cache1Bytes = caches["int1"];
  r.cache2Bytes = caches["int2"];
  r.cacheBytes = std::move(caches);
}

void
fillNdn(MetricsRecord& r, const ndn::RetrievalResult& res)
{
  r.success = res.success;
  if (res.ttfb) {
    r.ttfbMs = toMs(*res.ttfb);
  }
  r.completionMs = toMs(res.completion);
  r.deliveredBytes = res.deliveredBytes;
  uint64_t total = 0;
  r.arrivals.reserve(res.arrivals.size());
  for (const auto& a : res.arrivals) {
    total += a.bytes;
    r.arrivals.push_back({a.time, total});
  }
  if (!res.success) {
    r.failure = res.failedSegment ? "segment " + std::to_string(*res.failedSegment) +
                                      " exhausted its retries"
                                  : "retrieval failed";
  }

  // Interests for segments that had already arrived
  std::map<SegmentNumber, Time> firstArrival;
  for (const auto& a : res.arrivals) {
    firstArrival.try_emplace(a.segment, a.time);
  }
  for (const auto& i : res.interests) {
    auto it = firstArrival.find(i.segment);
    if (it != firstArrival.end() && i.time >= it->second) {
      ++r.refetched;
    }
  }
}

void
fillHttp(MetricsRecord& r, const http::HttpResult& res)
{
  r.success = res.success;
  if (res.ttfb) {
    r.ttfbMs = toMs(*res.ttfb);
  }
  r.completionMs = toMs(res.completion);
  r.deliveredBytes = res.deliveredBytes;
  r.arrivals.reserve(res.arrivals.size());
  for (const auto& a : res.arrivals) {
    r.arrivals.push_back({a.time, a.bytes});
  }
  r.failure = res.failure;
}

std::vector<const char*>
planes(const ScenarioConfig& cfg)
{
  std::vector<const char*> out;
  if (cfg.runsNdn()) {
    out.push_back(NDN);
  }
  if (cfg.runsHttp()) {
    out.push_back(HTTP);
  }
  return out;
}

std::string
label(const ScenarioConfig& cfg, const char* plane, uint64_t size, const std::string& mode,
      uint64_t seed)
{
  return std::string(1, static_cast<char>(cfg.experiment)) + "-" + plane + "-" +
         std::to_string(size) + "-" + mode + "-s" + std::to_string(seed);
}

void
addTask(std::vector<RunTask>& tasks, std::string name,
        std::function<MetricsRecord(std::ostream*)> fn)
{
  tasks.push_back({std::move(name), [fn = std::move(fn)] (std::ostream* trace) {
    return std::vector<MetricsRecord>{fn(trace)};
  }});
}

// ---- A: goodput with and without loss

void
planA(const ScenarioConfig& cfg, std::vector<RunTask>& tasks)
{
  for (uint64_t size : cfg.sizes) {
    for (std::string mode : {"lossless", "lossy"}) {
      auto topo = mode == "lossy" ? lossyTopology(cfg) : losslessTopology(cfg.topology);
      for (const char* plane : planes(cfg)) {
        for (int rep = 0; rep < cfg.repetitions; ++rep) {
          uint64_t seed = repetitionSeed(cfg, rep);
          addTask(tasks, label(cfg, plane, size, mode, seed),
                  [=, &cfg] (std::ostream* trace) {
            auto r = baseRecord(cfg, plane, size, mode, seed);
            if (plane == NDN) {
              NdnTestbed tb(cfg, topo, seed, size, trace);
              fillNdn(r, tb.fetch());
              r.originTouches = tb.originTouches();
              fillCaches(r, tb.cacheBytes());
            }
            else {
              HttpTestbed tb(cfg, topo, seed, size, trace);
              fillHttp(r, tb.get());
              r.originTouches = tb.originTouches();
              fillCaches(r, tb.cacheBytes());
            }
            return r;
          });
        }
      }
    }
  }
}

// ---- B: time to first byte

void
planB(const ScenarioConfig& cfg, std::vector<RunTask>& tasks)
{
  for (uint64_t size : cfg.sizes) {
    for (int t = 0; t <= cfg.randomTopologies; ++t) {
      auto topo = randomizedTopology(cfg, t);
      for (bool warm : {false, true}) {
        std::string mode = std::string(warm ? "warm" : "cold") + "-t" + std::to_string(t);
        for (const char* plane : planes(cfg)) {
          for (int rep = 0; rep < cfg.repetitions; ++rep) {
            uint64_t seed = repetitionSeed(cfg, rep);
            addTask(tasks, label(cfg, plane, size, mode, seed),
                    [=, &cfg] (std::ostream* trace) {
              auto r = baseRecord(cfg, plane, size, mode, seed);
              if (plane == NDN) {
                NdnTestbed tb(cfg, topo, seed, size, trace);
                if (warm) {
                  tb.fetch();
                }
                uint64_t before = tb.originTouches();
                fillNdn(r, tb.fetch());
                r.originTouches = tb.originTouches() - before;
                fillCaches(r, tb.cacheBytes());
              }
              else {
                HttpTestbed tb(cfg, topo, seed, size, trace);
                if (warm) {
                  tb.get();
                }
                uint64_t before = tb.originTouches();
                fillHttp(r, tb.get());
                r.originTouches = tb.originTouches() - before;
                fillCaches(r, tb.cacheBytes());
              }
              return r;
            });
          }
        }
      }
    }
  }
}

// ---- C: cache utilization after an upstream switch

void
planC(const ScenarioConfig& cfg, std::vector<RunTask>& tasks)
{
  std::string mode = "switch=" + formatNumber(cfg.switchFraction, 2);
  for (uint64_t size : cfg.sizes) {
    for (const char* plane : planes(cfg)) {
      for (int rep = 0; rep < cfg.repetitions; ++rep) {
        uint64_t seed = repetitionSeed(cfg, rep);
        addTask(tasks, label(cfg, plane, size, mode, seed), [=, &cfg] (std::ostream* trace) {
          auto r = baseRecord(cfg, plane, size, mode, seed);
          if (plane == NDN) {
            NdnTestbed tb(cfg, cfg.topology, seed, size, trace);
            auto& net = tb.net();
            NodeId csc = tb.topo().clientSideCache;
            FaceId first = net.faceToward(csc, tb.topo().intermediates[0]);
            FaceId second = net.faceToward(csc, tb.topo().intermediates[1]);
            uint64_t m = switchSegments(cfg, size);
            tb.clientSideCache().setForwardingOverride(
              [=] (const Interest& i) -> std::optional<FaceId> {
                return i.name.hasSegment() && i.name.segment() <= m ? first : second;
              });
            auto partial = tb.fetch();
            tb.clientSideCache().setForwardingOverride(
              [=] (const Interest&) -> std::optional<FaceId> { return second; });
            fillNdn(r, tb.fetch());
            r.success = r.success && partial.success;
            r.originTouches = tb.originTouches();
            fillCaches(r, tb.cacheBytes());
          }
          else {
            HttpTestbed tb(cfg, cfg.topology, seed, size, trace);
            auto cut = static_cast<uint64_t>(
              std::llround(cfg.switchFraction * static_cast<double>(size)));
            auto partial = tb.get(std::nullopt, cut);
            fillHttp(r, tb.get());
            r.success = r.success && (partial.aborted || partial.success);
            r.originTouches = tb.originTouches();
            fillCaches(r, tb.cacheBytes());
          }
          return r;
        });
      }
    }
  }
}

// ---- D: partial retrieval

void
planD(const ScenarioConfig& cfg, std::vector<RunTask>& tasks)
{
  const uint64_t size = cfg.sizes.at(0);
  for (uint64_t range : cfg.ranges) {
    std::vector<std::pair<const char*, std::string>> variants;
    if (cfg.runsNdn()) {
      variants.emplace_back(NDN, "cached_segments");
    }
    if (cfg.runsHttp()) {
      variants.emplace_back(HTTP, std::string(toString(http::RangeMode::Bypass)));
      variants.emplace_back(HTTP, std::string(toString(http::RangeMode::FullFetch)));
    }
    for (const auto& [plane, mode] : variants) {
      for (int rep = 0; rep < cfg.repetitions; ++rep) {
        uint64_t seed = repetitionSeed(cfg, rep);
        addTask(tasks, label(cfg, plane, range, mode, seed),
                [=, &cfg, plane = plane, mode = mode] (std::ostream* trace) {
          auto r = baseRecord(cfg, plane, range, mode, seed);
          if (plane == NDN) {
            NdnTestbed tb(cfg, cfg.topology, seed, size, trace);
            if (cfg.warmBytes > 0) {
              tb.fetch(ndn::ByteRange{0, cfg.warmBytes - 1});
            }
            uint64_t before = tb.originTouches();
            fillNdn(r, tb.fetch(ndn::ByteRange{0, range - 1}));
            r.originTouches = tb.originTouches() - before;
            fillCaches(r, tb.cacheBytes());
          }
          else {
            auto variant = cfg;
            variant.http.rangeMode = http::parseRangeMode(mode);
            HttpTestbed tb(variant, cfg.topology, seed, size, trace);
            if (cfg.warmBytes > 0) {
              tb.get(http::ByteRange{0, cfg.warmBytes - 1});
            }
            uint64_t before = tb.originTouches();
            fillHttp(r, tb.get(http::ByteRange{0, range - 1}));
            r.originTouches = tb.originTouches() - before;
            fillCaches(r, tb.cacheBytes());
          }
          return r;
        });
      }
    }
  }
}

// ---- E: failover

void
planE(const ScenarioConfig& cfg, std::vector<RunTask>& tasks)
{
  std::string mode = "kill=" + formatNumber(toMs(cfg.killTime), 0) + "ms";
  for (uint64_t size : cfg.sizes) {
    for (const char* plane : planes(cfg)) {
      for (int rep = 0; rep < cfg.repetitions; ++rep) {
        uint64_t seed = repetitionSeed(cfg, rep);
        addTask(tasks, label(cfg, plane, size, mode, seed), [=, &cfg] (std::ostream* trace) {
          auto r = baseRecord(cfg, plane, size, mode, seed);
          if (plane == NDN) {
            NdnTestbed tb(cfg, cfg.topology, seed, size, trace);
            auto& net = tb.net();
            NodeId csc = tb.topo().clientSideCache;
            net.schedule(csc, cfg.killTime, [&] {
              auto face = tb.clientSideCache().selectUpstream(tb.content().prefix);
              if (face) {
                net.killNode(net.neighbor(csc, *face));
              }
            }, "kill-serving");
            fillNdn(r, tb.fetch());
            r.originTouches = tb.originTouches();
            fillCaches(r, tb.cacheBytes());
          }
          else {
            HttpTestbed tb(cfg, cfg.topology, seed, size, trace);
            auto& net = tb.net();
            net.schedule(tb.topo().clientSideCache, cfg.killTime, [&] {
              if (auto up = tb.clientSideCache().lastUpstream(); up) {
                net.killNode(*up);
              }
            }, "kill-serving");
            fillHttp(r, tb.get());
            r.originTouches = tb.originTouches();
            fillCaches(r, tb.cacheBytes());
          }
          r.gapsMs = gapsInWindow(r.arrivals, cfg.killTime - cfg.gapWindowBefore,
                                  cfg.killTime + cfg.gapWindowAfter);
          if (!r.gapsMs.empty()) {
            r.maxGapMs = *std::max_element(r.gapsMs.begin(), r.gapsMs.end());
          }
          return r;
        });
      }
    }
  }
}

// ---- F: path switching

struct Degradation
{
  Time delay;
  double loss;
};

Degradation
drawDegradation(const ScenarioConfig& cfg, uint64_t seed)
{
  sim::Rng rng(seed, {0x64656772});
  double delayMs = rng.uniform(toMs(cfg.degradeDelayMin), toMs(cfg.degradeDelayMax));
  double loss = rng.uniform(cfg.degradeLossMin, cfg.degradeLossMax);
  return {fromMs(delayMs), loss};
}

/// Argmin of the path weight over live upstreams of the client-side cache, ties to the
/// lowest face, computed from the true link parameters.
std::string
expectedUpstream(const sim::Network& net, const sim::CdnTopology& topo)
{
  std::optional<std::pair<int64_t, FaceId>> best;
  std::string name;
  for (NodeId up : topo.intermediates) {
    const auto& l = net.link(net.linkBetween(topo.clientSideCache, up));
    if (!net.isAlive(up) || !l.isUp()) {
      continue;
    }
    std::pair<int64_t, FaceId> key{
      ndn::computePathWeight(toMs(l.params().delay), l.params().loss * 100.0),
      net.faceToward(topo.clientSideCache, up)};
    if (!best || key < *best) {
      best = key;
      name = net.nodeName(up);
    }
  }
  return name;
}

void
planF(const ScenarioConfig& cfg, std::vector<RunTask>& tasks)
{
  const std::string mode = "degrade";
  for (uint64_t size : cfg.sizes) {
    for (const char* plane : planes(cfg)) {
      for (int rep = 0; rep < cfg.repetitions; ++rep) {
        uint64_t seed = repetitionSeed(cfg, rep);
        addTask(tasks, label(cfg, plane, size, mode, seed), [=, &cfg] (std::ostream* trace) {
          auto r = baseRecord(cfg, plane, size, mode, seed);
          auto deg = drawDegradation(cfg, seed);
          if (plane == NDN) {
            NdnTestbed tb(cfg, cfg.topology, seed, size, trace);
            auto& net = tb.net();
            auto& csc = tb.clientSideCache();
            const auto& topo = tb.topo();
            const Name prefix = tb.content().prefix;
            auto chosenName = [&] () -> std::string {
              auto face = csc.selectUpstream(prefix);
              return face ? net.nodeName(net.neighbor(topo.clientSideCache, *face)) : "";
            };
            csc.setQualityUpdateHook([&] {
              r.upstreamSeries.push_back({net.now(), chosenName(), expectedUpstream(net, topo)});
            });
            net.schedule(topo.clientSideCache, cfg.degradeTime, [&] {
              if (auto face = csc.selectUpstream(prefix); face) {
                net.changeLink(net.faceLink(topo.clientSideCache, *face), deg.delay, deg.loss);
              }
            }, "degrade");
            fillNdn(r, tb.fetch());
            r.originTouches = tb.originTouches();
            fillCaches(r, tb.cacheBytes());
          }
          else {
            HttpTestbed tb(cfg, cfg.topology, seed, size, trace);
            auto& net = tb.net();
            auto& csc = tb.clientSideCache();
            const auto& topo = tb.topo();
            std::function<void()> tick = [&] {
              auto up = csc.lastUpstream();
              r.upstreamSeries.push_back({net.now(), up ? net.nodeName(*up) : "", ""});
              if (tb.client().isRunning()) {
                net.schedule(topo.clientSideCache, cfg.ndn.strategyInterval, tick, "sample");
              }
            };
            net.schedule(topo.clientSideCache, cfg.ndn.strategyInterval, tick, "sample");
            net.schedule(topo.clientSideCache, cfg.degradeTime, [&] {
              if (auto up = csc.lastUpstream(); up) {
                net.changeLink(net.linkBetween(topo.clientSideCache, *up), deg.delay, deg.loss);
              }
            }, "degrade");
            fillHttp(r, tb.get());
            r.originTouches = tb.originTouches();
            fillCaches(r, tb.cacheBytes());
          }
          return r;
        });
      }
    }
  }
}

} // namespace

std::vector<RunTask>
planRuns(const ScenarioConfig& cfg)
{
  std::vector<RunTask> tasks;
  switch (cfg.experiment) {
    case ExperimentId::A:
      planA(cfg, tasks);
      break;
    case ExperimentId::B:
      planB(cfg, tasks);
      break;
    case ExperimentId::C:
      planC(cfg, tasks);
      break;
    case ExperimentId::D:
      planD(cfg, tasks);
      break;
    case ExperimentId::E:
      planE(cfg, tasks);
      break;
    case ExperimentId::F:
      planF(cfg, tasks);
      break;
  }
  return tasks;
}

std::vector<MetricsRecord>
runExperiment(const ScenarioConfig& cfg, const RunOptions& options)
{
  auto tasks = planRuns(cfg);
  std::vector<std::vector<MetricsRecord>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (size_t i = next++; i < tasks.size(); i = next++) {
      try {
        if (options.traceDir) {
          std::ofstream trace(*options.traceDir + "/" + tasks[i].label + ".trace",
                              std::ios::binary);
          if (!trace) {
            throw std::runtime_error("cannot write trace for " + tasks[i].label);
          }
          results[i] = tasks[i].run(&trace);
        }
        else {
          results[i] = tasks[i].run(nullptr);
        }
      }
      catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  size_t jobs = std::clamp<size_t>(options.jobs < 1 ? 1 : options.jobs, 1, std::max<size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  for (size_t j = 1; j < jobs; ++j) {
    pool.emplace_back(worker);
  }
  worker();
  for (auto& t : pool) {
    t.join();
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }

  std::vector<MetricsRecord> out;
  for (auto& batch : results) {
    for (auto& r : batch) {
      out.push_back(std::move(r));
    }
  }
  return out;
}

void
writePlotData(std::ostream& os, const ScenarioConfig& cfg,
              const std::vector<MetricsRecord>& records)
{
  auto summary = summarize(records);
  auto opt = [] (const std::optional<double>& v) { return v ? formatNumber(*v) : "nan"; };
  switch (cfg.experiment) {
    case ExperimentId::A:
      os << "# size_bytes plane mode completion_median_ms completion_stddev_ms\n";
      for (const auto& row : summary.rows) {
        os << row.sizeBytes << ' ' << row.plane << ' ' << row.mode << ' '
           << formatNumber(row.completionMedian) << ' ' << formatNumber(row.completionStddev)
           << '\n';
      }
      break;
    case ExperimentId::B:
      os << "# size_bytes plane mode ttfb_mean_ms ttfb_stddev_ms\n";
      for (const auto& row : summary.rows) {
        os << row.sizeBytes << ' ' << row.plane << ' ' << row.mode << ' '
           << opt(row.ttfbMean) << ' ' << opt(row.ttfbStddev) << '\n';
      }
      break;
    case ExperimentId::C:
      os << "# size_bytes plane mode cache1_bytes cache2_bytes total_bytes\n";
      for (const auto& row : summary.rows) {
        os << row.sizeBytes << ' ' << row.plane << ' ' << row.mode << ' '
           << formatNumber(row.cache1Mean, 0) << ' ' << formatNumber(row.cache2Mean, 0) << ' '
           << formatNumber(row.cache1Mean + row.cache2Mean, 0) << '\n';
      }
      break;
    case ExperimentId::D:
      os << "# range_bytes plane mode completion_median_ms origin_touches_mean\n";
      for (const auto& row : summary.rows) {
        os << row.sizeBytes << ' ' << row.plane << ' ' << row.mode << ' '
           << formatNumber(row.completionMedian) << ' ' << formatNumber(row.originTouchesMean)
           << '\n';
      }
      break;
    case ExperimentId::E: {
      // arrivals around the fault, first repetition of each plane
      os << "# plane seed time_ms cumulative_bytes\n";
      std::set<std::string> done;
      Time from = cfg.killTime - cfg.gapWindowBefore;
      Time to = cfg.killTime + cfg.gapWindowAfter;
      for (const auto& r : records) {
        if (!done.insert(r.plane).second) {
          continue;
        }
        for (const auto& a : r.arrivals) {
          if (a.time >= from && a.time <= to) {
            os << r.plane << ' ' << r.seed << ' ' << formatNumber(toMs(a.time)) << ' '
               << a.bytes << '\n';
          }
        }
      }
      break;
    }
    case ExperimentId::F: {
      // per-interval delivered bytes and chosen upstream, first repetition of each plane
      os << "# plane seed time_ms chosen expected delivered_bytes_in_interval\n";
      std::set<std::string> done;
      for (const auto& r : records) {
        if (!done.insert(r.plane).second) {
          continue;
        }
        size_t a = 0;
        uint64_t prev = 0;
        for (const auto& s : r.upstreamSeries) {
          uint64_t cum = prev;
          while (a < r.arrivals.size() && r.arrivals[a].time <= s.time) {
            cum = r.arrivals[a++].bytes;
          }
          os << r.plane << ' ' << r.seed << ' ' << formatNumber(toMs(s.time)) << ' '
             << (s.chosen.empty() ? "-" : s.chosen) << ' '
             << (s.expected.empty() ? "-" : s.expected) << ' ' << cum - prev << '\n';
          prev = cum;
        }
      }
      break;
    }
  }
}

} // namespace ndncdn::exp
