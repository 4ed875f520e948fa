#include "ndncdn/http/origin.hpp"

namespace ndncdn::http {

HttpOrigin::HttpOrigin(sim::Network& net, NodeId node, const ContentCatalog& catalog,
                       TcpConfig config)
  : m_stack(net, node, config)
  , m_catalog(catalog)
{
  m_stack.setAcceptHandler([this] (TcpServerEnd& end) {
    end.setRequestHandler([this] (TcpServerEnd& e, const HttpRequest& r) { onRequest(e, r); });
  });
}

void
HttpOrigin::onRequest(TcpServerEnd& end, const HttpRequest& req)
{
  auto length = m_catalog.responseLength(req);
  if (!length) {
    ++m_rejected;
    end.reject(m_catalog.sizeOf(req.url) ? "416 range not satisfiable" : "404 not found");
    return;
  }
  ++m_touches;
  end.respond(*length);
  end.supply(*length);
}

} // namespace ndncdn::http
