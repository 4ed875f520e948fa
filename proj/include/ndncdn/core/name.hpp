#ifndef NDNCDN_CORE_NAME_HPP
#define NDNCDN_CORE_NAME_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ndncdn {

using SegmentNumber = uint64_t;

/** \brief One component of a hierarchical name.
 *
 *  A component is either an opaque byte string or a segment number.
 *  Segment components sort after every generic component.
 */
class Component
{
public:
  Component() = default;

  explicit
  Component(std::string bytes)
    : m_value(std::move(bytes))
  {
  }

  static Component
  fromSegment(SegmentNumber segment)
  {
    Component c;
    c.m_value = segment;
    return c;
  }

  bool
  isSegment() const noexcept
  {
    return std::holds_alternative<SegmentNumber>(m_value);
  }

  /// \pre isSegment()
  SegmentNumber
  toSegment() const
  {
    return std::get<SegmentNumber>(m_value);
  }

  /// \pre !isSegment()
  const std::string&
  bytes() const
  {
    return std::get<std::string>(m_value);
  }

  /// Canonical text, with '/', '%' and '=' percent-escaped in generic components.
  std::string
  toUri() const;

  friend auto operator<=>(const Component&, const Component&) = default;
  friend bool operator==(const Component&, const Component&) = default;

private:
  std::variant<std::string, SegmentNumber> m_value;
};

/** \brief Hierarchical NDN name.
 *
 *  Text form is `/`-separated components. A segment number, when present, is the
 *  terminal component and prints as `segment=<decimal>`.
 */
class Name
{
public:
  class Error : public std::invalid_argument
  {
  public:
    using std::invalid_argument::invalid_argument;
  };

  Name() = default;

  /// Parses canonical text form. Throws Name::Error on malformed input.
  explicit
  Name(std::string_view uri);

  Name(const char* uri)
    : Name(std::string_view(uri))
  {
  }

  Name&
  append(Component component);

  Name&
  append(std::string_view bytes)
  {
    return append(Component(std::string(bytes)));
  }

  Name&
  appendSegment(SegmentNumber segment)
  {
    return append(Component::fromSegment(segment));
  }

  size_t
  size() const noexcept
  {
    return m_components.size();
  }

  bool
  empty() const noexcept
  {
    return m_components.empty();
  }

  const Component&
  operator[](size_t i) const
  {
    return m_components[i];
  }

  const Component&
  at(size_t i) const
  {
    return m_components.at(i);
  }

  auto begin() const noexcept { return m_components.begin(); }
  auto end() const noexcept { return m_components.end(); }

  /// First \p n components.
  Name
  getPrefix(size_t n) const;

  bool
  hasSegment() const noexcept
  {
    return !m_components.empty() && m_components.back().isSegment();
  }

  std::optional<SegmentNumber>
  segment() const
  {
    if (!hasSegment())
      return std::nullopt;
    return m_components.back().toSegment();
  }

  /// Component-wise prefix test; `/t` is not a prefix of `/test`.
  bool
  isPrefixOf(const Name& other) const noexcept;

  std::string
  toUri() const;

  friend auto operator<=>(const Name&, const Name&) = default;
  friend bool operator==(const Name&, const Name&) = default;

private:
  std::vector<Component> m_components;
};

std::ostream&
operator<<(std::ostream& os, const Name& name);

} // namespace ndncdn

template<>
struct std::hash<ndncdn::Name>
{
  size_t
  operator()(const ndncdn::Name& name) const noexcept;
};

#endif // NDNCDN_CORE_NAME_HPP
