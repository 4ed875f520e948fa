#ifndef NDNCDN_HTTP_RENO_SENDER_HPP
#define NDNCDN_HTTP_RENO_SENDER_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace ndncdn::http {

struct RenoConfig
{
  uint32_t initialCwnd = 10;
  uint32_t initialSsthresh = 64;
  uint32_t dupAckThreshold = 3;
};

/** \brief Segment-counting Reno sender state, independent of time and I/O.
 *
 *  Segments are numbered from 0; acks are cumulative (next expected segment).
 *  Slow start adds one segment per new ack, congestion avoidance one per window.
 *  Three duplicate acks halve the window and retransmit the first hole; partial
 *  acks during recovery retransmit the next hole. A timeout collapses the window
 *  to one segment and resends from the first unacknowledged segment.
 */
class RenoSender
{
public:
  enum class AckKind
  {
    Stale,
    New,
    Duplicate,
  };

  explicit
  RenoSender(RenoConfig config = {});

  /// Starts a new response of \p totalSegments; the congestion state carries over.
  void
  startTransfer(uint64_t totalSegments);

  /// Number of segments the application has made available so far.
  void
  setAvailable(uint64_t segments);

  /// Segments to put on the wire now, in order; retransmissions first.
  std::vector<uint64_t>
  pull();

  AckKind
  onAck(uint64_t ack);

  void
  onTimeout();

  bool
  complete() const noexcept
  {
    return m_una >= m_total;
  }

  uint32_t
  cwnd() const noexcept
  {
    return m_cwnd;
  }

  uint32_t
  ssthresh() const noexcept
  {
    return m_ssthresh;
  }

  uint64_t
  una() const noexcept
  {
    return m_una;
  }

  uint64_t
  nxt() const noexcept
  {
    return m_nxt;
  }

  uint64_t
  total() const noexcept
  {
    return m_total;
  }

  uint32_t
  dupAcks() const noexcept
  {
    return m_dupAcks;
  }

  bool
  inRecovery() const noexcept
  {
    return m_recovery;
  }

  bool
  hasOutstanding() const noexcept
  {
    return m_una < m_nxt;
  }

private:
  uint64_t
  window() const noexcept
  {
    return m_cwnd + (m_recovery ? m_dupAcks : 0);
  }

private:
  RenoConfig m_config;
  uint32_t m_cwnd;
  uint32_t m_ssthresh;
  uint32_t m_caCount = 0;
  uint32_t m_dupAcks = 0;
  bool m_recovery = false;
  uint64_t m_recover = 0;
  /// no fast retransmit until everything outstanding at the last timeout is acked
  uint64_t m_timeoutGuard = 0;
  uint64_t m_total = 0;
  uint64_t m_available = 0;
  uint64_t m_una = 0;
  uint64_t m_nxt = 0;
  uint64_t m_highSent = 0;
  std::optional<uint64_t> m_retransmit;
};

} // namespace ndncdn::http

#endif // NDNCDN_HTTP_RENO_SENDER_HPP
