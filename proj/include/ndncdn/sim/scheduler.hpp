#ifndef NDNCDN_SIM_SCHEDULER_HPP
#define NDNCDN_SIM_SCHEDULER_HPP

#include "ndncdn/core/time.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace ndncdn::sim {

using EventId = uint64_t;

/// One executed event, as written to a trace.
struct TraceRecord
{
  Time time;
  std::string node;
  std::string kind;
  std::string detail;
};

/// Formats `time_ms<TAB>node<TAB>event_kind<TAB>detail`.
std::string
formatTraceLine(const TraceRecord& rec);

/** \brief Discrete-event clock and queue.
 *
 *  Events run in (time, sequence) order, where sequence is assigned at scheduling
 *  time, so equal-time events run in the order they were scheduled.
 */
class Scheduler
{
public:
  class Error : public std::logic_error
  {
  public:
    using std::logic_error::logic_error;
  };

  using Callback = std::function<void()>;
  using TraceSink = std::function<void(const TraceRecord&)>;

  Time
  now() const noexcept
  {
    return m_now;
  }

  /** \brief Schedules \p cb at absolute time \p at.
   *  \throw Error if \p at is earlier than now()
   */
  EventId
  schedule(Time at, Callback cb, std::string node = {}, std::string kind = "timer",
           std::string detail = {});

  EventId
  scheduleIn(Time delay, Callback cb, std::string node = {}, std::string kind = "timer",
             std::string detail = {})
  {
    return schedule(m_now + delay, std::move(cb), std::move(node), std::move(kind),
                    std::move(detail));
  }

  /// Cancelling an executed or unknown event is a no-op.
  void
  cancel(EventId id);

  /// Executes every event with time <= \p end; the clock then reads \p end.
  void
  runUntil(Time end);

  /// Runs until the queue drains.
  void
  run();

  bool
  empty() const noexcept
  {
    return m_live.empty();
  }

  uint64_t
  executedCount() const noexcept
  {
    return m_executed;
  }

  void
  setTraceSink(TraceSink sink)
  {
    m_trace = std::move(sink);
  }

  bool
  isTracing() const noexcept
  {
    return static_cast<bool>(m_trace);
  }

private:
  struct Event
  {
    Time time;
    EventId seq;
    Callback callback;
    std::string node;
    std::string kind;
    std::string detail;
  };

  struct Later
  {
    bool
    operator()(const Event& a, const Event& b) const noexcept
    {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  bool
  step(Time end);

private:
  Time m_now = 0us;
  EventId m_nextSeq = 0;
  uint64_t m_executed = 0;
  std::priority_queue<Event, std::vector<Event>, Later> m_queue;
  std::unordered_set<EventId> m_live;
  std::unordered_set<EventId> m_cancelled;
  TraceSink m_trace;
};

} // namespace ndncdn::sim

#endif // NDNCDN_SIM_SCHEDULER_HPP
