#ifndef NDNCDN_CORE_NAME_TABLE_HPP
#define NDNCDN_CORE_NAME_TABLE_HPP

#include "ndncdn/core/name.hpp"

#include <map>
#include <memory>
#include <optional>
#include <utility>

namespace ndncdn {

/** \brief Component trie mapping name prefixes to values.
 *
 *  Matching is component-wise: an entry for `/t` never matches `/test`.
 */
template<typename T>
class NameTable
{
public:
  /// Inserts or replaces the value stored at \p prefix.
  T&
  insert(const Name& prefix, T value)
  {
    Node* node = &m_root;
    for (const auto& c : prefix) {
      auto& child = node->children[c];
      if (!child) {
        child = std::make_unique<Node>();
      }
      node = child.get();
    }
    if (!node->value) {
      ++m_size;
    }
    node->value = std::move(value);
    return *node->value;
  }

  bool
  erase(const Name& prefix)
  {
    Node* node = findNode(prefix);
    if (node == nullptr || !node->value) {
      return false;
    }
    node->value.reset();
    --m_size;
    return true;
  }

  T*
  findExact(const Name& prefix)
  {
    Node* node = findNode(prefix);
    return node != nullptr && node->value ? &*node->value : nullptr;
  }

  const T*
  findExact(const Name& prefix) const
  {
    return const_cast<NameTable*>(this)->findExact(prefix);
  }

  /// Value of the deepest entry whose prefix is a prefix of \p query, or nullptr.
  const T*
  longestPrefixMatch(const Name& query) const
  {
    const Node* node = &m_root;
    const T* best = node->value ? &*node->value : nullptr;
    for (const auto& c : query) {
      auto it = node->children.find(c);
      if (it == node->children.end()) {
        break;
      }
      node = it->second.get();
      if (node->value) {
        best = &*node->value;
      }
    }
    return best;
  }

  T*
  longestPrefixMatch(const Name& query)
  {
    return const_cast<T*>(std::as_const(*this).longestPrefixMatch(query));
  }

  size_t
  size() const noexcept
  {
    return m_size;
  }

private:
  struct Node
  {
    std::optional<T> value;
    std::map<Component, std::unique_ptr<Node>> children;
  };

  Node*
  findNode(const Name& prefix)
  {
    Node* node = &m_root;
    for (const auto& c : prefix) {
      auto it = node->children.find(c);
      if (it == node->children.end()) {
        return nullptr;
      }
      node = it->second.get();
    }
    return node;
  }

private:
  Node m_root;
  size_t m_size = 0;
};

} // namespace ndncdn

#endif // NDNCDN_CORE_NAME_TABLE_HPP
