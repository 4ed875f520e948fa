#include "ndncdn/core/name.hpp"

#include <charconv>
#include <ostream>

namespace ndncdn {

namespace {

constexpr std::string_view SEGMENT_MARKER = "segment=";

bool
needsEscape(char c)
{
  return c == '/' || c == '%' || c == '=' ||
         static_cast<unsigned char>(c) < 0x21 || static_cast<unsigned char>(c) > 0x7e;
}

int
hexValue(char c)
{
  if (c >= '0' && c <= '9')
    return c - '0';
  if (c >= 'a' && c <= 'f')
    return c - 'a' + 10;
  if (c >= 'A' && c <= 'F')
    return c - 'A' + 10;
  return -1;
}

std::string
unescape(std::string_view token)
{
  std::string out;
  out.reserve(token.size());
  for (size_t i = 0; i < token.size(); ++i) {
    if (token[i] != '%') {
      out.push_back(token[i]);
      continue;
    }
    if (i + 2 >= token.size()) {
      throw Name::Error("truncated percent escape in '" + std::string(token) + "'");
    }
    int hi = hexValue(token[i + 1]);
    int lo = hexValue(token[i + 2]);
    if (hi < 0 || lo < 0) {
      throw Name::Error("bad percent escape in '" + std::string(token) + "'");
    }
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

} // namespace

std::string
Component::toUri() const
{
  if (isSegment()) {
    return std::string(SEGMENT_MARKER) + std::to_string(toSegment());
  }

  static constexpr char HEX[] = "0123456789ABCDEF";
  std::string out;
  for (char c : bytes()) {
    if (needsEscape(c)) {
      auto u = static_cast<unsigned char>(c);
      out.push_back('%');
      out.push_back(HEX[u >> 4]);
      out.push_back(HEX[u & 0xF]);
    }
    else {
      out.push_back(c);
    }
  }
  return out;
}

Name::Name(std::string_view uri)
{
  if (uri.empty() || uri.front() != '/') {
    throw Error("name must start with '/': '" + std::string(uri) + "'");
  }
  uri.remove_prefix(1);
  if (uri.empty()) {
    return;
  }
  if (uri.back() == '/') {
    uri.remove_suffix(1);
  }

  while (true) {
    size_t slash = uri.find('/');
    std::string_view token = uri.substr(0, slash);
    if (token.empty()) {
      throw Error("empty name component");
    }

    if (token.substr(0, SEGMENT_MARKER.size()) == SEGMENT_MARKER) {
      std::string_view digits = token.substr(SEGMENT_MARKER.size());
      SegmentNumber seg = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seg);
      if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw Error("bad segment component '" + std::string(token) + "'");
      }
      append(Component::fromSegment(seg));
    }
    else {
      append(Component(unescape(token)));
    }

    if (slash == std::string_view::npos) {
      break;
    }
    uri.remove_prefix(slash + 1);
  }
}

Name&
Name::append(Component component)
{
  if (hasSegment()) {
    throw Error("segment component must be the last component");
  }
  m_components.push_back(std::move(component));
  return *this;
}

Name
Name::getPrefix(size_t n) const
{
  Name prefix;
  prefix.m_components.assign(m_components.begin(),
                             m_components.begin() + std::min(n, m_components.size()));
  return prefix;
}

bool
Name::isPrefixOf(const Name& other) const noexcept
{
  if (size() > other.size()) {
    return false;
  }
  for (size_t i = 0; i < size(); ++i) {
    if (m_components[i] != other.m_components[i]) {
      return false;
    }
  }
  return true;
}

std::string
Name::toUri() const
{
  if (m_components.empty()) {
    return "/";
  }
  std::string out;
  for (const auto& c : m_components) {
    out.push_back('/');
    out += c.toUri();
  }
  return out;
}

std::ostream&
operator<<(std::ostream& os, const Name& name)
{
  return os << name.toUri();
}

} // namespace ndncdn

size_t
std::hash<ndncdn::Name>::operator()(const ndncdn::Name& name) const noexcept
{
  // FNV-1a over component encodings
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h] (uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (const auto& c : name) {
    if (c.isSegment()) {
      mix(0xFFu);
      mix(c.toSegment());
    }
    else {
      mix(0x01u);
      for (char ch : c.bytes()) {
        mix(static_cast<unsigned char>(ch));
      }
    }
  }
  return static_cast<size_t>(h);
}
