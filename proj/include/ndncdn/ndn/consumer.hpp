#ifndef NDNCDN_NDN_CONSUMER_HPP
#define NDNCDN_NDN_CONSUMER_HPP

#include "ndncdn/ndn/forwarder.hpp"
#include "ndncdn/sim/rng.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace ndncdn::ndn {

struct ConsumerConfig
{
  /// maximum outstanding Interests
  size_t window = 64;
  int maxRetries = 5;
  Time minRto = 200ms;
  /// used until the first RTT sample
  Time initialRto = 1s;
  Time interestLifetime = DEFAULT_INTEREST_LIFETIME;
  /// naming convention shared with producers; maps byte ranges to segments
  uint64_t chunkSize = DEFAULT_CHUNK_SIZE;
};

/// Inclusive byte interval.
struct ByteRange
{
  uint64_t first = 0;
  uint64_t last = 0;
};

struct PacketArrival
{
  Time time;
  SegmentNumber segment;
  uint64_t bytes;
};

struct InterestSend
{
  Time time;
  SegmentNumber segment;
  bool retransmission;
};

struct RetrievalResult
{
  bool success = false;
  Time start = 0us;
  /// first Data arrival minus first Interest send
  std::optional<Time> ttfb;
  /// last Data arrival minus first Interest send
  Time completion = 0us;
  uint64_t deliveredBytes = 0;
  uint64_t segmentsDelivered = 0;
  uint64_t retransmissions = 0;
  std::optional<SegmentNumber> failedSegment;
  std::vector<PacketArrival> arrivals;
  std::vector<InterestSend> interests;
};

/** \brief Windowed segment fetcher bound to a forwarder's application face.
 *
 *  Keeps at most `window` Interests outstanding, retransmits a segment after
 *  RTO = max(2 * SRTT, minRto) with a fresh nonce, and gives up after maxRetries.
 *  A full fetch learns the last segment from the first Data; a ranged fetch
 *  pipelines immediately.
 */
class Consumer
{
public:
  using Callback = std::function<void(const RetrievalResult&)>;

  Consumer(sim::Network& net, Forwarder& forwarder, ConsumerConfig config, uint64_t seed);

  Consumer(const Consumer&) = delete;
  Consumer& operator=(const Consumer&) = delete;

  /** \brief Starts retrieving \p prefix, or only the segments overlapping \p range.
   *  \pre no retrieval in progress
   */
  void
  fetch(const Name& prefix, std::optional<ByteRange> range, Callback done);

  bool
  isRunning() const noexcept
  {
    return m_running;
  }

  /// Result so far; final once the callback has run.
  const RetrievalResult&
  result() const noexcept
  {
    return m_result;
  }

  std::optional<Time>
  srtt() const noexcept
  {
    return m_srtt;
  }

  Time
  rto() const noexcept;

private:
  struct InFlight
  {
    Time sent;
    int retries = 0;
    sim::EventId timer;
  };

  void
  fillWindow();

  void
  sendInterest(SegmentNumber seg, bool retransmission);

  void
  onData(const Data& data);

  void
  onTimeout(SegmentNumber seg);

  void
  finish(bool success);

  SegmentNumber
  sendLimit() const noexcept;

private:
  sim::Network& m_net;
  Forwarder& m_forwarder;
  ConsumerConfig m_config;
  sim::Rng m_rng;

  Name m_prefix;
  SegmentNumber m_first = 1;
  std::optional<SegmentNumber> m_rangeLast;
  std::optional<SegmentNumber> m_final;
  SegmentNumber m_next = 1;
  std::map<SegmentNumber, InFlight> m_inFlight;
  std::map<SegmentNumber, int> m_retries;
  uint64_t m_satisfied = 0;
  std::optional<Time> m_srtt;

  bool m_running = false;
  RetrievalResult m_result;
  Callback m_done;
};

} // namespace ndncdn::ndn

#endif // NDNCDN_NDN_CONSUMER_HPP
