#include "ndncdn/ndn/consumer.hpp"

#include <algorithm>

namespace ndncdn::ndn {

Consumer::Consumer(sim::Network& net, Forwarder& forwarder, ConsumerConfig config, uint64_t seed)
  : m_net(net)
  , m_forwarder(forwarder)
  , m_config(config)
  , m_rng(seed, {0x434f4e53ULL, forwarder.node()})
{
  if (m_config.window == 0) {
    throw std::invalid_argument("consumer window must be positive");
  }
  m_forwarder.addAppDataHandler([this] (const Data& d) { onData(d); });
}

Time
Consumer::rto() const noexcept
{
  if (!m_srtt) {
    return m_config.initialRto;
  }
  return std::max(2 * *m_srtt, m_config.minRto);
}

void
Consumer::fetch(const Name& prefix, std::optional<ByteRange> range, Callback done)
{
  if (m_running) {
    throw std::logic_error("consumer already has a retrieval in progress");
  }
  m_prefix = prefix;
  m_done = std::move(done);
  m_result = RetrievalResult{};
  m_result.start = m_net.now();
  m_inFlight.clear();
  m_satisfied = 0;
  m_final.reset();
  m_rangeLast.reset();
  m_first = 1;
  m_running = true;

  if (range) {
    SegmentRange segs = segmentsForBytes(range->first, range->last, m_config.chunkSize);
    if (segs.empty()) {
      m_net.schedule(m_forwarder.node(), 0us, [this] { finish(true); }, "consumer-done");
      return;
    }
    m_first = segs.first;
    m_rangeLast = segs.last;
  }
  m_next = m_first;
  fillWindow();
}

SegmentNumber
Consumer::sendLimit() const noexcept
{
  if (m_final) {
    return m_rangeLast ? std::min(*m_rangeLast, *m_final) : *m_final;
  }
  // a full fetch sends only its first segment until the final block is known
  return m_rangeLast ? *m_rangeLast : m_first;
}

void
Consumer::fillWindow()
{
  while (m_running && m_inFlight.size() < m_config.window && m_next <= sendLimit()) {
    sendInterest(m_next++, false);
  }
}

void
Consumer::sendInterest(SegmentNumber seg, bool retransmission)
{
  Interest interest;
  interest.name = m_prefix;
  interest.name.appendSegment(seg);
  interest.nonce = m_rng.next();
  interest.lifetime = m_config.interestLifetime;

  int retries = retransmission ? m_inFlight.at(seg).retries : 0;
  auto timer = m_net.schedule(m_forwarder.node(), rto(), [this, seg] { onTimeout(seg); },
                              "consumer-rto");
  m_inFlight[seg] = InFlight{m_net.now(), retries, timer};
  m_result.interests.push_back({m_net.now(), seg, retransmission});

  m_forwarder.expressInterest(interest);
}

void
Consumer::onData(const Data& data)
{
  if (!m_running || !m_prefix.isPrefixOf(data.name) || data.name.size() != m_prefix.size() + 1) {
    return;
  }
  auto seg = data.name.segment();
  if (!seg) {
    return;
  }
  auto it = m_inFlight.find(*seg);
  if (it == m_inFlight.end()) {
    return;
  }

  Time now = m_net.now();
  m_net.cancel(it->second.timer);
  if (it->second.retries == 0) {
    Time sample = now - it->second.sent;
    m_srtt = m_srtt ? Time((7 * m_srtt->count() + sample.count()) / 8) : sample;
  }
  m_inFlight.erase(it);

  if (!m_result.ttfb) {
    m_result.ttfb = now - m_result.start;
  }
  m_result.arrivals.push_back({now, *seg, data.payloadSize});
  m_result.deliveredBytes += data.payloadSize;
  ++m_result.segmentsDelivered;
  ++m_satisfied;

  if (!m_final) {
    m_final = data.finalSegment;
    SegmentNumber limit = sendLimit();
    for (auto j = m_inFlight.upper_bound(limit); j != m_inFlight.end();) {
      m_net.cancel(j->second.timer);
      j = m_inFlight.erase(j);
    }
  }

  SegmentNumber limit = sendLimit();
  uint64_t needed = limit >= m_first ? limit - m_first + 1 : 0;
  if (m_satisfied >= needed) {
    finish(true);
    return;
  }
  fillWindow();
}

void
Consumer::onTimeout(SegmentNumber seg)
{
  auto it = m_inFlight.find(seg);
  if (!m_running || it == m_inFlight.end()) {
    return;
  }
  if (++it->second.retries > m_config.maxRetries) {
    m_result.failedSegment = seg;
    finish(false);
    return;
  }
  ++m_result.retransmissions;
  sendInterest(seg, true);
}

void
Consumer::finish(bool success)
{
  for (const auto& [seg, f] : m_inFlight) {
    m_net.cancel(f.timer);
  }
  m_inFlight.clear();
  m_running = false;
  m_result.success = success;
  if (success && !m_result.arrivals.empty()) {
    m_result.completion = m_result.arrivals.back().time - m_result.start;
  }
  else {
    m_result.completion = m_net.now() - m_result.start;
  }
  if (m_done) {
    auto done = std::move(m_done);
    m_done = nullptr;
    done(m_result);
  }
}

} // namespace ndncdn::ndn
