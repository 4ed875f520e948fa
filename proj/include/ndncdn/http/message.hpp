#ifndef NDNCDN_HTTP_MESSAGE_HPP
#define NDNCDN_HTTP_MESSAGE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace ndncdn::http {

/// Inclusive byte interval of a range request.
struct ByteRange
{
  uint64_t first = 0;
  uint64_t last = 0;

  uint64_t
  length() const noexcept
  {
    return last - first + 1;
  }

  friend bool
  operator==(const ByteRange&, const ByteRange&) = default;
};

struct HttpRequest
{
  std::string url;
  std::optional<ByteRange> range;
  bool cacheable = true;

  class Error : public std::invalid_argument
  {
  public:
    using std::invalid_argument::invalid_argument;
  };

  /// Request line, e.g. `GET /f bytes=0-99`.
  std::string
  encode() const;

  /// \throw Error on a malformed request line
  static HttpRequest
  decode(const std::string& line);

  friend bool
  operator==(const HttpRequest&, const HttpRequest&) = default;
};

/// Sizes of every object the origins can serve, keyed by URL.
class ContentCatalog
{
public:
  void
  add(const std::string& url, uint64_t size);

  std::optional<uint64_t>
  sizeOf(const std::string& url) const;

  /// Bytes the response to \p req carries, or nullopt if the URL is unknown or the
  /// range falls outside the object.
  std::optional<uint64_t>
  responseLength(const HttpRequest& req) const;

private:
  std::map<std::string, uint64_t> m_sizes;
};

} // namespace ndncdn::http

#endif // NDNCDN_HTTP_MESSAGE_HPP
