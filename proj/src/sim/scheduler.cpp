#include "ndncdn/sim/scheduler.hpp"

#include <cstdio>

namespace ndncdn::sim {

std::string
formatTraceLine(const TraceRecord& rec)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", toMs(rec.time));
  std::string line(buf);
  line += '\t';
  line += rec.node.empty() ? "-" : rec.node;
  line += '\t';
  line += rec.kind;
  line += '\t';
  line += rec.detail;
  return line;
}

EventId
Scheduler::schedule(Time at, Callback cb, std::string node, std::string kind, std::string detail)
{
  if (at < m_now) {
    throw Error("cannot schedule at " + std::to_string(toMs(at)) + "ms, clock is at " +
                std::to_string(toMs(m_now)) + "ms");
  }
  EventId id = m_nextSeq++;
  m_live.insert(id);
  m_queue.push(Event{at, id, std::move(cb), std::move(node), std::move(kind), std::move(detail)});
  return id;
}

void
Scheduler::cancel(EventId id)
{
  if (m_live.erase(id) > 0) {
    m_cancelled.insert(id);
  }
}

bool
Scheduler::step(Time end)
{
  while (!m_queue.empty()) {
    const Event& top = m_queue.top();
    if (top.time > end) {
      return false;
    }
    if (auto it = m_cancelled.find(top.seq); it != m_cancelled.end()) {
      m_cancelled.erase(it);
      m_queue.pop();
      continue;
    }

    // move out before popping; the callback may schedule more events
    Event ev = std::move(const_cast<Event&>(top));
    m_queue.pop();
    m_live.erase(ev.seq);
    m_now = ev.time;
    ++m_executed;
    if (m_trace) {
      m_trace(TraceRecord{ev.time, std::move(ev.node), std::move(ev.kind), std::move(ev.detail)});
    }
    ev.callback();
    return true;
  }
  return false;
}

void
Scheduler::runUntil(Time end)
{
  while (step(end)) {
  }
  if (end > m_now) {
    m_now = end;
  }
}

void
Scheduler::run()
{
  while (step(Time::max())) {
  }
}

} // namespace ndncdn::sim
