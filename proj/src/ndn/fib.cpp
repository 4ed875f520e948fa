#include "ndncdn/ndn/fib.hpp"

#include <algorithm>

namespace ndncdn::ndn {

void
Fib::addNextHop(const Name& prefix, FaceId face, int64_t cost)
{
  FibEntry* entry = m_table.findExact(prefix);
  if (entry == nullptr) {
    entry = &m_table.insert(prefix, FibEntry{prefix, {}});
  }
  auto it = std::find_if(entry->nexthops.begin(), entry->nexthops.end(),
                         [face] (const NextHop& h) { return h.face == face; });
  if (it != entry->nexthops.end()) {
    it->cost = cost;
  }
  else {
    entry->nexthops.push_back({face, cost});
  }
}

bool
Fib::removeNextHop(const Name& prefix, FaceId face)
{
  FibEntry* entry = m_table.findExact(prefix);
  if (entry == nullptr) {
    return false;
  }
  auto n = std::erase_if(entry->nexthops, [face] (const NextHop& h) { return h.face == face; });
  if (entry->nexthops.empty()) {
    m_table.erase(prefix);
  }
  return n > 0;
}

} // namespace ndncdn::ndn
