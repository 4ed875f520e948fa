#ifndef NDNCDN_NDN_FORWARDER_HPP
#define NDNCDN_NDN_FORWARDER_HPP

#include "ndncdn/ndn/content-store.hpp"
#include "ndncdn/ndn/fib.hpp"
#include "ndncdn/ndn/pit.hpp"
#include "ndncdn/ndn/strategy.hpp"
#include "ndncdn/sim/network.hpp"

#include <deque>
#include <functional>
#include <map>

namespace ndncdn::ndn {

using sim::NodeId;

enum class QualitySource
{
  /// sampled from true link parameters every strategy interval
  Oracle,
  /// per-face RTT EWMA and loss over a sliding window of forwarded Interests
  Measured,
};

struct ForwarderConfig
{
  bool csEnabled = true;
  uint64_t csCapacity = 4ull << 30;
  StrategyMode strategy = StrategyMode::BestRouteFailover;
  QualitySource qualitySource = QualitySource::Oracle;
  Time strategyInterval = 100ms;
  /// measured mode: consecutive timeouts before a face is declared dead
  int failoverThreshold = 3;
  Time reprobeInterval = 1s;
  double rttAlpha = 0.1;
  size_t lossWindow = 100;
  Time minTimeout = 200ms;
  Time initialTimeout = 1s;
};

struct ForwarderCounters
{
  uint64_t interestsIn = 0;
  uint64_t interestsOut = 0;
  uint64_t dataIn = 0;
  uint64_t dataOut = 0;
  uint64_t csHits = 0;
  uint64_t csMisses = 0;
  /// Interests with no FIB route and no cache hit
  uint64_t noRouteDrops = 0;
  uint64_t duplicateDrops = 0;
  uint64_t aggregated = 0;
  uint64_t unsolicitedData = 0;
  uint64_t retransmissions = 0;
  uint64_t failoverReforwards = 0;
  std::map<FaceId, uint64_t> forwardsPerFace;
};

/** \brief NDN forwarding engine bound to one simulated node.
 *
 *  Local applications (consumer, producer) attach to sim::APP_FACE.
 */
class Forwarder
{
public:
  /// Returns Data for an Interest reaching the local producer, or nullopt.
  using ProducerCallback = std::function<std::optional<Data>(const Interest&)>;
  using AppDataCallback = std::function<void(const Data&)>;
  /// Scripted forwarding decision consulted before the strategy; nullopt defers.
  using ForwardingOverride = std::function<std::optional<FaceId>(const Interest&)>;

  Forwarder(sim::Network& net, NodeId node, ForwarderConfig config = {});

  Forwarder(const Forwarder&) = delete;
  Forwarder& operator=(const Forwarder&) = delete;

  NodeId
  node() const noexcept
  {
    return m_node;
  }

  const ForwarderConfig&
  config() const noexcept
  {
    return m_config;
  }

  Fib&
  fib() noexcept
  {
    return m_fib;
  }

  Pit&
  pit() noexcept
  {
    return m_pit;
  }

  ContentStore&
  contentStore() noexcept
  {
    return m_cs;
  }

  const ForwarderCounters&
  counters() const noexcept
  {
    return m_counters;
  }

  /// Adds a route whose static cost defaults to the link delay in ms.
  void
  addRoute(const Name& prefix, FaceId face, std::optional<int64_t> cost = std::nullopt);

  void
  setProducer(ProducerCallback cb)
  {
    m_producer = std::move(cb);
  }

  void
  addAppDataHandler(AppDataCallback cb)
  {
    m_appHandlers.push_back(std::move(cb));
  }

  void
  setForwardingOverride(ForwardingOverride cb)
  {
    m_override = std::move(cb);
  }

  /// Called after every oracle quality sample (strategy interval tick).
  void
  setQualityUpdateHook(std::function<void()> hook)
  {
    m_qualityHook = std::move(hook);
  }

  /// Interest from a local application.
  void
  expressInterest(const Interest& interest)
  {
    processInterest(sim::APP_FACE, interest);
  }

  void
  processInterest(FaceId inFace, const Interest& interest);

  void
  processData(FaceId inFace, const Data& data);

  /// Current strategy decision for \p name, ignoring the forwarding override.
  std::optional<FaceId>
  selectUpstream(const Name& name, FaceId excludeFace = sim::INVALID_FACE) const;

  const QualityMap&
  qualities() const noexcept
  {
    return m_qualities;
  }

  /// Resamples oracle qualities now; normally driven by the strategy interval.
  void
  sampleOracleQualities();

private:
  void
  receive(FaceId inFace, const sim::Packet& packet);

  bool
  forward(PitEntry& entry, const Interest& interest, FaceId inFace);

  void
  sendInterest(PitEntry& entry, FaceId face, const Interest& interest);

  void
  sendData(FaceId face, const Data& data);

  void
  armExpiry(PitEntry& entry);

  void
  erasePitEntry(PitEntry& entry);

  void
  ensureSampling();

  void
  onSampleTick();

  void
  onLinkStateChange(sim::LinkId link);

  void
  markFaceDead(FaceId face);

  void
  reforwardPending(FaceId deadFace);

  void
  onOutRecordTimeout(const Name& name, FaceId face, Nonce nonce);

  void
  recordOutcome(FaceId face, bool lost);

  Time
  faceTimeout(FaceId face) const;

private:
  struct FaceMeasurement
  {
    std::optional<double> srttMs;
    std::deque<bool> outcomes;
    size_t lostInWindow = 0;
    int consecutiveTimeouts = 0;
  };

  sim::Network& m_net;
  NodeId m_node;
  ForwarderConfig m_config;

  Fib m_fib;
  Pit m_pit;
  ContentStore m_cs;
  QualityMap m_qualities;
  std::map<FaceId, FaceMeasurement> m_measurements;
  ForwarderCounters m_counters;

  ProducerCallback m_producer;
  std::vector<AppDataCallback> m_appHandlers;
  ForwardingOverride m_override;
  std::function<void()> m_qualityHook;

  bool m_sampling = false;
};

} // namespace ndncdn::ndn

#endif // NDNCDN_NDN_FORWARDER_HPP
