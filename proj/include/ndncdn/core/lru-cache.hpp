#ifndef NDNCDN_CORE_LRU_CACHE_HPP
#define NDNCDN_CORE_LRU_CACHE_HPP

#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

namespace ndncdn {

/** \brief Byte-budgeted cache evicting least-recently-accessed entries first.
 *
 *  Invariant: used() <= capacity() after every operation.
 */
template<typename Key, typename Value, typename Hash = std::hash<Key>>
class LruByteCache
{
public:
  explicit
  LruByteCache(uint64_t capacity = 0)
    : m_capacity(capacity)
  {
  }

  uint64_t
  capacity() const noexcept
  {
    return m_capacity;
  }

  uint64_t
  used() const noexcept
  {
    return m_used;
  }

  size_t
  size() const noexcept
  {
    return m_index.size();
  }

  /** \brief Stores \p value as most recently used.
   *  \return evicted keys, or nullopt if \p bytes exceeds capacity and nothing was stored
   */
  std::optional<std::vector<Key>>
  insert(const Key& key, Value value, uint64_t bytes)
  {
    if (bytes > m_capacity) {
      return std::nullopt;
    }
    erase(key);

    std::vector<Key> evicted;
    while (m_used + bytes > m_capacity) {
      const Key& victim = m_order.back().key;
      evicted.push_back(victim);
      m_used -= m_order.back().bytes;
      m_index.erase(victim);
      m_order.pop_back();
    }
    m_order.push_front(Slot{key, std::move(value), bytes});
    m_index.emplace(key, m_order.begin());
    m_used += bytes;
    return evicted;
  }

  /// Returns the stored value and marks it most recently used.
  Value*
  lookup(const Key& key)
  {
    auto it = m_index.find(key);
    if (it == m_index.end()) {
      return nullptr;
    }
    m_order.splice(m_order.begin(), m_order, it->second);
    return &it->second->value;
  }

  /// Lookup without touching recency.
  const Value*
  peek(const Key& key) const
  {
    auto it = m_index.find(key);
    return it == m_index.end() ? nullptr : &it->second->value;
  }

  bool
  erase(const Key& key)
  {
    auto it = m_index.find(key);
    if (it == m_index.end()) {
      return false;
    }
    m_used -= it->second->bytes;
    m_order.erase(it->second);
    m_index.erase(it);
    return true;
  }

  /// Keys from most to least recently used.
  std::vector<Key>
  keysByRecency() const
  {
    std::vector<Key> keys;
    keys.reserve(m_order.size());
    for (const auto& slot : m_order) {
      keys.push_back(slot.key);
    }
    return keys;
  }

private:
  struct Slot
  {
    Key key;
    Value value;
    uint64_t bytes;
  };

  uint64_t m_capacity;
  uint64_t m_used = 0;
  std::list<Slot> m_order;
  std::unordered_map<Key, typename std::list<Slot>::iterator, Hash> m_index;
};

} // namespace ndncdn

#endif // NDNCDN_CORE_LRU_CACHE_HPP
