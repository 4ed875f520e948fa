#ifndef NDNCDN_HTTP_ORIGIN_HPP
#define NDNCDN_HTTP_ORIGIN_HPP

#include "ndncdn/http/tcp.hpp"

namespace ndncdn::http {

/// Authoritative server: answers every valid request in full from its catalog.
class HttpOrigin
{
public:
  HttpOrigin(sim::Network& net, NodeId node, const ContentCatalog& catalog,
             TcpConfig config = {});

  TcpStack&
  stack() noexcept
  {
    return m_stack;
  }

  /// Requests answered with content.
  uint64_t
  touches() const noexcept
  {
    return m_touches;
  }

  uint64_t
  rejected() const noexcept
  {
    return m_rejected;
  }

private:
  void
  onRequest(TcpServerEnd& end, const HttpRequest& req);

private:
  TcpStack m_stack;
  const ContentCatalog& m_catalog;
  uint64_t m_touches = 0;
  uint64_t m_rejected = 0;
};

} // namespace ndncdn::http

#endif // NDNCDN_HTTP_ORIGIN_HPP
