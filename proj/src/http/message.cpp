#include "ndncdn/http/message.hpp"

#include <charconv>

namespace ndncdn::http {

std::string
HttpRequest::encode() const
{
  std::string line = "GET " + url;
  if (range) {
    line += " bytes=" + std::to_string(range->first) + "-" + std::to_string(range->last);
  }
  if (!cacheable) {
    line += " no-store";
  }
  return line;
}

namespace {

uint64_t
parseNumber(std::string_view text)
{
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw HttpRequest::Error("bad number in request: " + std::string(text));
  }
  return v;
}

} // namespace

HttpRequest
HttpRequest::decode(const std::string& line)
{
  std::string_view rest(line);
  if (rest.substr(0, 4) != "GET ") {
    throw Error("unsupported request: " + line);
  }
  rest.remove_prefix(4);

  HttpRequest req;
  auto sp = rest.find(' ');
  req.url = std::string(rest.substr(0, sp));
  if (req.url.empty() || req.url.front() != '/') {
    throw Error("bad url in request: " + line);
  }
  while (sp != std::string_view::npos) {
    rest.remove_prefix(sp + 1);
    sp = rest.find(' ');
    std::string_view token = rest.substr(0, sp);
    if (token == "no-store") {
      req.cacheable = false;
    }
    else if (token.substr(0, 6) == "bytes=") {
      token.remove_prefix(6);
      auto dash = token.find('-');
      if (dash == std::string_view::npos) {
        throw Error("bad range in request: " + line);
      }
      req.range = ByteRange{parseNumber(token.substr(0, dash)),
                            parseNumber(token.substr(dash + 1))};
    }
    else {
      throw Error("unknown request token: " + std::string(token));
    }
  }
  return req;
}

void
ContentCatalog::add(const std::string& url, uint64_t size)
{
  if (size == 0) {
    throw std::invalid_argument("content size must be positive: " + url);
  }
  m_sizes[url] = size;
}

std::optional<uint64_t>
ContentCatalog::sizeOf(const std::string& url) const
{
  auto it = m_sizes.find(url);
  if (it == m_sizes.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::optional<uint64_t>
ContentCatalog::responseLength(const HttpRequest& req) const
{
  auto size = sizeOf(req.url);
  if (!size) {
    return std::nullopt;
  }
  if (!req.range) {
    return size;
  }
  if (req.range->first > req.range->last || req.range->last >= *size) {
    return std::nullopt;
  }
  return req.range->length();
}

} // namespace ndncdn::http
