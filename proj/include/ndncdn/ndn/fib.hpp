#ifndef NDNCDN_NDN_FIB_HPP
#define NDNCDN_NDN_FIB_HPP

#include "ndncdn/core/name-table.hpp"
#include "ndncdn/sim/network.hpp"

#include <vector>

namespace ndncdn::ndn {

using sim::FaceId;

struct NextHop
{
  FaceId face = 0;
  int64_t cost = 0;
};

struct FibEntry
{
  Name prefix;
  /// distinct faces, in insertion order
  std::vector<NextHop> nexthops;
};

class Fib
{
public:
  /// Adds \p face under \p prefix, or updates its cost when already present.
  void
  addNextHop(const Name& prefix, FaceId face, int64_t cost);

  bool
  removeNextHop(const Name& prefix, FaceId face);

  const FibEntry*
  findLongestPrefixMatch(const Name& name) const
  {
    return m_table.longestPrefixMatch(name);
  }

  const FibEntry*
  findExactMatch(const Name& prefix) const
  {
    return m_table.findExact(prefix);
  }

  size_t
  size() const noexcept
  {
    return m_table.size();
  }

private:
  NameTable<FibEntry> m_table;
};

} // namespace ndncdn::ndn

#endif // NDNCDN_NDN_FIB_HPP
