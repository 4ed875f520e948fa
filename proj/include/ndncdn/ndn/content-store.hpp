#ifndef NDNCDN_NDN_CONTENT_STORE_HPP
#define NDNCDN_NDN_CONTENT_STORE_HPP

#include "ndncdn/core/lru-cache.hpp"
#include "ndncdn/core/packet.hpp"

#include <vector>

namespace ndncdn::ndn {

/// Packet-granular Data cache, budgeted by payload + signature bytes.
class ContentStore
{
public:
  explicit
  ContentStore(uint64_t capacityBytes = 0)
    : m_cache(capacityBytes)
  {
  }

  /// Returns evicted names; a packet larger than the whole budget is skipped and counted.
  std::vector<Name>
  insert(const Data& data);

  /// Exact-name lookup; a hit becomes most recently used.
  const Data*
  lookup(const Name& name);

  uint64_t
  capacity() const noexcept
  {
    return m_cache.capacity();
  }

  uint64_t
  used() const noexcept
  {
    return m_cache.used();
  }

  size_t
  size() const noexcept
  {
    return m_cache.size();
  }

  /// Application bytes held, excluding signature overhead; linear in size().
  uint64_t
  payloadBytes() const;

  uint64_t
  hits() const noexcept
  {
    return m_hits;
  }

  uint64_t
  misses() const noexcept
  {
    return m_misses;
  }

  uint64_t
  skipped() const noexcept
  {
    return m_skipped;
  }

  std::vector<Name>
  namesByRecency() const
  {
    return m_cache.keysByRecency();
  }

private:
  LruByteCache<Name, Data> m_cache;
  uint64_t m_hits = 0;
  uint64_t m_misses = 0;
  uint64_t m_skipped = 0;
};

} // namespace ndncdn::ndn

#endif // NDNCDN_NDN_CONTENT_STORE_HPP
