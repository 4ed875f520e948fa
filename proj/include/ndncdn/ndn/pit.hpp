#ifndef NDNCDN_NDN_PIT_HPP
#define NDNCDN_NDN_PIT_HPP

#include "ndncdn/core/packet.hpp"
#include "ndncdn/sim/scheduler.hpp"
#include "ndncdn/ndn/fib.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <vector>

namespace ndncdn::ndn {

struct InRecord
{
  FaceId face;
  Nonce nonce;
  Time expiry;
};

struct OutRecord
{
  FaceId face;
  Nonce nonce;
  Time sent;
  /// measured-mode timeout for this transmission
  std::optional<sim::EventId> timer;
};

struct PitEntry
{
  Name name;
  std::vector<InRecord> inRecords;
  std::vector<OutRecord> outRecords;
  Time expiry = 0us;
  std::optional<sim::EventId> expiryTimer;

  InRecord*
  findInRecord(FaceId face)
  {
    auto it = std::find_if(inRecords.begin(), inRecords.end(),
                           [face] (const InRecord& r) { return r.face == face; });
    return it == inRecords.end() ? nullptr : &*it;
  }

  bool
  hasNonce(Nonce nonce) const
  {
    return std::any_of(inRecords.begin(), inRecords.end(),
                       [nonce] (const InRecord& r) { return r.nonce == nonce; });
  }

  OutRecord*
  lastOutRecord()
  {
    return outRecords.empty() ? nullptr : &outRecords.back();
  }
};

/// One entry per pending Interest name.
class Pit
{
public:
  PitEntry*
  find(const Name& name)
  {
    auto it = m_entries.find(name);
    return it == m_entries.end() ? nullptr : &it->second;
  }

  PitEntry&
  insert(const Name& name)
  {
    auto [it, isNew] = m_entries.try_emplace(name);
    if (isNew) {
      it->second.name = name;
    }
    return it->second;
  }

  void
  erase(const Name& name)
  {
    m_entries.erase(name);
  }

  size_t
  size() const noexcept
  {
    return m_entries.size();
  }

  bool
  empty() const noexcept
  {
    return m_entries.empty();
  }

  template<typename Fn>
  void
  forEach(Fn&& fn)
  {
    for (auto& [name, entry] : m_entries) {
      fn(entry);
    }
  }

private:
  std::unordered_map<Name, PitEntry> m_entries;
};

} // namespace ndncdn::ndn

#endif // NDNCDN_NDN_PIT_HPP
