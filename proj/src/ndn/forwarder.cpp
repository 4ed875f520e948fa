#include "ndncdn/ndn/forwarder.hpp"

#include <algorithm>
#include <cmath>

namespace ndncdn::ndn {

Forwarder::Forwarder(sim::Network& net, NodeId node, ForwarderConfig config)
  : m_net(net)
  , m_node(node)
  , m_config(config)
  , m_cs(config.csEnabled ? config.csCapacity : 0)
{
  m_net.setHandler(m_node, [this] (FaceId face, const sim::Packet& p) { receive(face, p); });
  m_net.addLinkStateListener([this] (sim::LinkId link) { onLinkStateChange(link); });

  for (FaceId f = 1; f <= m_net.faceCount(m_node); ++f) {
    m_qualities[f] = FaceQuality{};
  }
  if (m_config.qualitySource == QualitySource::Oracle) {
    sampleOracleQualities();
  }
}

void
Forwarder::addRoute(const Name& prefix, FaceId face, std::optional<int64_t> cost)
{
  if (!cost) {
    cost = face == sim::APP_FACE ?
           0 : std::llround(toMs(m_net.link(m_net.faceLink(m_node, face)).params().delay));
  }
  m_fib.addNextHop(prefix, face, *cost);
}

void
Forwarder::receive(FaceId inFace, const sim::Packet& packet)
{
  if (auto* interest = std::get_if<Interest>(&packet)) {
    processInterest(inFace, *interest);
  }
  else if (auto* data = std::get_if<Data>(&packet)) {
    processData(inFace, *data);
  }
}

void
Forwarder::processInterest(FaceId inFace, const Interest& interest)
{
  ++m_counters.interestsIn;
  ensureSampling();

  PitEntry* entry = m_pit.find(interest.name);
  if (entry != nullptr && entry->hasNonce(interest.nonce)) {
    ++m_counters.duplicateDrops;
    return;
  }

  if (m_config.csEnabled) {
    if (const Data* cached = m_cs.lookup(interest.name); cached != nullptr) {
      ++m_counters.csHits;
      sendData(inFace, *cached);
      return;
    }
    ++m_counters.csMisses;
  }

  Time expiry = m_net.now() + interest.lifetime;

  if (entry == nullptr) {
    if (m_fib.findLongestPrefixMatch(interest.name) == nullptr) {
      ++m_counters.noRouteDrops;
      return;
    }
    entry = &m_pit.insert(interest.name);
    entry->inRecords.push_back({inFace, interest.nonce, expiry});
    armExpiry(*entry);
    if (!forward(*entry, interest, inFace)) {
      ++m_counters.noRouteDrops;
      erasePitEntry(*entry);
    }
    return;
  }

  if (InRecord* in = entry->findInRecord(inFace); in != nullptr) {
    // same downstream, fresh nonce: a consumer retransmission, which goes upstream again
    in->nonce = interest.nonce;
    in->expiry = expiry;
    armExpiry(*entry);
    ++m_counters.retransmissions;
    forward(*entry, interest, inFace);
    return;
  }

  entry->inRecords.push_back({inFace, interest.nonce, expiry});
  armExpiry(*entry);
  ++m_counters.aggregated;
}

std::optional<FaceId>
Forwarder::selectUpstream(const Name& name, FaceId excludeFace) const
{
  const FibEntry* fibEntry = m_fib.findLongestPrefixMatch(name);
  if (fibEntry == nullptr) {
    return std::nullopt;
  }
  FibEntry candidates{fibEntry->prefix, {}};
  for (const auto& hop : fibEntry->nexthops) {
    if (hop.face != excludeFace) {
      candidates.nexthops.push_back(hop);
    }
  }
  return selectFace(candidates, m_qualities, m_config.strategy);
}

bool
Forwarder::forward(PitEntry& entry, const Interest& interest, FaceId inFace)
{
  std::optional<FaceId> face;
  if (m_override) {
    face = m_override(interest);
  }
  if (!face) {
    face = selectUpstream(interest.name, inFace);
  }
  if (!face) {
    return false;
  }
  sendInterest(entry, *face, interest);
  return true;
}

void
Forwarder::sendInterest(PitEntry& entry, FaceId face, const Interest& interest)
{
  auto it = std::find_if(entry.outRecords.begin(), entry.outRecords.end(),
                         [face] (const OutRecord& r) { return r.face == face; });
  if (it != entry.outRecords.end()) {
    if (it->timer) {
      m_net.cancel(*it->timer);
    }
    entry.outRecords.erase(it);
  }
  OutRecord rec{face, interest.nonce, m_net.now(), std::nullopt};

  ++m_counters.interestsOut;
  ++m_counters.forwardsPerFace[face];

  if (face == sim::APP_FACE) {
    entry.outRecords.push_back(rec);
    m_net.schedule(m_node, 0us, [this, interest] {
      if (m_producer) {
        if (auto data = m_producer(interest)) {
          processData(sim::APP_FACE, *data);
        }
      }
    }, "app-interest");
    return;
  }

  if (m_config.qualitySource == QualitySource::Measured) {
    rec.timer = m_net.schedule(m_node, faceTimeout(face),
                               [this, name = interest.name, face, nonce = interest.nonce] {
                                 onOutRecordTimeout(name, face, nonce);
                               }, "face-timeout");
  }
  entry.outRecords.push_back(rec);
  m_net.send(m_node, face, interest);
}

void
Forwarder::processData(FaceId inFace, const Data& data)
{
  ++m_counters.dataIn;
  PitEntry* entry = m_pit.find(data.name);
  if (entry == nullptr) {
    ++m_counters.unsolicitedData;
    return;
  }

  if (m_config.qualitySource == QualitySource::Measured && inFace != sim::APP_FACE) {
    for (const auto& out : entry->outRecords) {
      if (out.face != inFace) {
        continue;
      }
      auto& m = m_measurements[inFace];
      double sample = toMs(m_net.now() - out.sent);
      m.srttMs = m.srttMs ? (1.0 - m_config.rttAlpha) * *m.srttMs + m_config.rttAlpha * sample
                          : sample;
      m_qualities[inFace].delayMs = *m.srttMs / 2.0;
      recordOutcome(inFace, false);
    }
  }

  if (m_config.csEnabled) {
    m_cs.insert(data);
  }

  std::vector<FaceId> downstream;
  Time now = m_net.now();
  for (const auto& in : entry->inRecords) {
    if (in.expiry >= now && in.face != inFace) {
      downstream.push_back(in.face);
    }
  }
  erasePitEntry(*entry);

  for (FaceId f : downstream) {
    sendData(f, data);
  }
}

void
Forwarder::sendData(FaceId face, const Data& data)
{
  ++m_counters.dataOut;
  if (face == sim::APP_FACE) {
    m_net.schedule(m_node, 0us, [this, data] {
      for (const auto& handler : m_appHandlers) {
        handler(data);
      }
    }, "app-data");
    return;
  }
  m_net.send(m_node, face, data);
}

void
Forwarder::armExpiry(PitEntry& entry)
{
  Time expiry = 0us;
  for (const auto& in : entry.inRecords) {
    expiry = std::max(expiry, in.expiry);
  }
  if (entry.expiryTimer && expiry == entry.expiry) {
    return;
  }
  if (entry.expiryTimer) {
    m_net.cancel(*entry.expiryTimer);
  }
  entry.expiry = expiry;
  entry.expiryTimer = m_net.schedule(m_node, expiry - m_net.now(), [this, name = entry.name] {
    PitEntry* e = m_pit.find(name);
    if (e != nullptr && e->expiry <= m_net.now()) {
      e->expiryTimer.reset();
      erasePitEntry(*e);
    }
  }, "pit-expiry");
}

void
Forwarder::erasePitEntry(PitEntry& entry)
{
  if (entry.expiryTimer) {
    m_net.cancel(*entry.expiryTimer);
  }
  for (const auto& out : entry.outRecords) {
    if (out.timer) {
      m_net.cancel(*out.timer);
    }
  }
  m_pit.erase(Name(entry.name));
}

void
Forwarder::ensureSampling()
{
  if (m_config.qualitySource != QualitySource::Oracle || m_sampling) {
    return;
  }
  m_sampling = true;
  sampleOracleQualities();
  // ticks stay aligned to multiples of the interval
  auto interval = m_config.strategyInterval.count();
  Time next((m_net.now().count() / interval + 1) * interval);
  m_net.schedule(m_node, next - m_net.now(), [this] { onSampleTick(); }, "strategy-tick");
}

void
Forwarder::onSampleTick()
{
  if (m_pit.empty()) {
    m_sampling = false;
    return;
  }
  sampleOracleQualities();
  m_net.schedule(m_node, m_config.strategyInterval, [this] { onSampleTick(); }, "strategy-tick");
}

void
Forwarder::sampleOracleQualities()
{
  std::vector<FaceId> died;
  for (FaceId f = 1; f <= m_net.faceCount(m_node); ++f) {
    const auto& params = m_net.link(m_net.faceLink(m_node, f)).params();
    FaceQuality& q = m_qualities[f];
    bool wasAlive = q.alive;
    q.delayMs = toMs(params.delay);
    q.lossPercent = params.loss * 100.0;
    q.alive = m_net.isFaceUsable(m_node, f);
    if (wasAlive && !q.alive) {
      died.push_back(f);
    }
  }
  for (FaceId f : died) {
    reforwardPending(f);
  }
  if (m_qualityHook) {
    m_qualityHook();
  }
}

void
Forwarder::onLinkStateChange(sim::LinkId link)
{
  if (m_config.qualitySource != QualitySource::Oracle || !m_net.isAlive(m_node)) {
    return;
  }
  for (FaceId f = 1; f <= m_net.faceCount(m_node); ++f) {
    if (m_net.faceLink(m_node, f) != link) {
      continue;
    }
    FaceQuality& q = m_qualities[f];
    bool usable = m_net.isFaceUsable(m_node, f);
    if (q.alive && !usable) {
      markFaceDead(f);
    }
    else {
      q.alive = usable;
    }
  }
}

void
Forwarder::markFaceDead(FaceId face)
{
  m_qualities[face].alive = false;
  reforwardPending(face);

  if (m_config.qualitySource == QualitySource::Measured) {
    m_net.schedule(m_node, m_config.reprobeInterval, [this, face] {
      // probing: eligible again until it accumulates another run of timeouts
      m_measurements[face].consecutiveTimeouts = 0;
      m_qualities[face].alive = true;
    }, "face-reprobe");
  }
}

void
Forwarder::reforwardPending(FaceId deadFace)
{
  std::vector<Name> stranded;
  m_pit.forEach([&] (PitEntry& e) {
    if (const OutRecord* last = e.lastOutRecord(); last != nullptr && last->face == deadFace) {
      stranded.push_back(e.name);
    }
  });
  std::sort(stranded.begin(), stranded.end());

  for (const auto& name : stranded) {
    PitEntry* e = m_pit.find(name);
    if (e == nullptr || e->inRecords.empty()) {
      continue;
    }
    const InRecord& in = e->inRecords.back();
    std::optional<FaceId> face = selectUpstream(name, in.face);
    if (!face || *face == deadFace) {
      continue;
    }
    Time remaining = std::max(e->expiry - m_net.now(), Time(1));
    ++m_counters.failoverReforwards;
    sendInterest(*e, *face, Interest{name, in.nonce, remaining});
  }
}

void
Forwarder::onOutRecordTimeout(const Name& name, FaceId face, Nonce nonce)
{
  PitEntry* e = m_pit.find(name);
  if (e == nullptr) {
    return;
  }
  for (auto& out : e->outRecords) {
    if (out.face == face && out.nonce == nonce) {
      out.timer.reset();
      recordOutcome(face, true);
      return;
    }
  }
}

void
Forwarder::recordOutcome(FaceId face, bool lost)
{
  auto& m = m_measurements[face];
  m.outcomes.push_back(lost);
  m.lostInWindow += lost ? 1 : 0;
  if (m.outcomes.size() > m_config.lossWindow) {
    m.lostInWindow -= m.outcomes.front() ? 1 : 0;
    m.outcomes.pop_front();
  }
  FaceQuality& q = m_qualities[face];
  q.lossPercent = 100.0 * static_cast<double>(m.lostInWindow) /
                  static_cast<double>(m.outcomes.size());

  if (!lost) {
    m.consecutiveTimeouts = 0;
    return;
  }
  ++m.consecutiveTimeouts;
  if (q.alive && m.consecutiveTimeouts >= m_config.failoverThreshold) {
    markFaceDead(face);
  }
}

Time
Forwarder::faceTimeout(FaceId face) const
{
  auto it = m_measurements.find(face);
  if (it == m_measurements.end() || !it->second.srttMs) {
    return m_config.initialTimeout;
  }
  return std::max(fromMs(2.0 * *it->second.srttMs), m_config.minTimeout);
}

} // namespace ndncdn::ndn
