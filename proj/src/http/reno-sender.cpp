#include "ndncdn/http/reno-sender.hpp"

#include <algorithm>

namespace ndncdn::http {

RenoSender::RenoSender(RenoConfig config)
  : m_config(config)
  , m_cwnd(std::max<uint32_t>(config.initialCwnd, 1))
  , m_ssthresh(std::max<uint32_t>(config.initialSsthresh, 2))
{
}

void
RenoSender::startTransfer(uint64_t totalSegments)
{
  m_total = totalSegments;
  m_available = 0;
  m_una = m_nxt = m_highSent = 0;
  m_dupAcks = 0;
  m_recovery = false;
  m_recover = m_timeoutGuard = 0;
  m_retransmit.reset();
}

void
RenoSender::setAvailable(uint64_t segments)
{
  m_available = std::min(std::max(m_available, segments), m_total);
}

std::vector<uint64_t>
RenoSender::pull()
{
  std::vector<uint64_t> out;
  if (m_retransmit) {
    out.push_back(*m_retransmit);
    m_retransmit.reset();
  }
  while (m_nxt < m_available && m_nxt - m_una < window()) {
    out.push_back(m_nxt++);
  }
  m_highSent = std::max(m_highSent, m_nxt);
  return out;
}

RenoSender::AckKind
RenoSender::onAck(uint64_t ack)
{
  if (ack > m_una && ack <= m_highSent) {
    m_una = ack;
    m_nxt = std::max(m_nxt, ack);
    if (m_recovery) {
      if (ack >= m_recover) {
        m_recovery = false;
        m_dupAcks = 0;
        m_caCount = 0;
      }
      else {
        m_retransmit = ack;
        m_dupAcks = 0;
      }
      return AckKind::New;
    }
    m_dupAcks = 0;
    if (m_cwnd < m_ssthresh) {
      ++m_cwnd;
    }
    else if (++m_caCount >= m_cwnd) {
      ++m_cwnd;
      m_caCount = 0;
    }
    return AckKind::New;
  }

  if (ack == m_una && m_una < m_nxt) {
    ++m_dupAcks;
    if (!m_recovery && m_dupAcks == m_config.dupAckThreshold && m_una >= m_timeoutGuard) {
      m_ssthresh = std::max<uint32_t>(m_cwnd / 2, 2);
      m_cwnd = m_ssthresh;
      m_caCount = 0;
      m_recovery = true;
      m_recover = m_nxt;
      m_retransmit = m_una;
    }
    return AckKind::Duplicate;
  }
  return AckKind::Stale;
}

void
RenoSender::onTimeout()
{
  m_ssthresh = std::max<uint32_t>(m_cwnd / 2, 2);
  m_cwnd = 1;
  m_caCount = 0;
  m_dupAcks = 0;
  m_recovery = false;
  m_retransmit.reset();
  m_timeoutGuard = m_highSent;
  m_nxt = m_una;
}

} // namespace ndncdn::http
