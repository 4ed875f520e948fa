#include "ndncdn/ndn/content-store.hpp"

namespace ndncdn::ndn {

std::vector<Name>
ContentStore::insert(const Data& data)
{
  auto evicted = m_cache.insert(data.name, data, data.storedSize());
  if (!evicted) {
    ++m_skipped;
    return {};
  }
  return std::move(*evicted);
}

const Data*
ContentStore::lookup(const Name& name)
{
  const Data* d = m_cache.lookup(name);
  if (d != nullptr) {
    ++m_hits;
  }
  else {
    ++m_misses;
  }
  return d;
}

uint64_t
ContentStore::payloadBytes() const
{
  uint64_t total = 0;
  for (const auto& name : m_cache.keysByRecency()) {
    total += m_cache.peek(name)->payloadSize;
  }
  return total;
}

} // namespace ndncdn::ndn
